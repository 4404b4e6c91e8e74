fn main() {
    // TODO(scaffold): subcommands land with the core modules
}
