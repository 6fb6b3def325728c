fn main() {
    std::process::exit(deque_tree::cli::main_entry());
}
