fn main() {
    println!("front-lab");
}
