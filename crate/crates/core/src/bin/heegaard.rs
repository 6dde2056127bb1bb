fn main() -> ! {
    heegaard::cli::main()
}
