fn main() {
    // TODO(scaffold): criterion benches land with the charsum module
}
