//! Regenerates the golden existence table at data/existence_2_2.csv.
//! Run from the crate root: `cargo run -p rootext --example gen_golden`.

use rootext::model::exhaustive_existence_table;

fn main() {
    let table = exhaustive_existence_table(2, 2).expect("(2, 2) is within the guard");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/existence_2_2.csv");
    std::fs::write(path, &table).expect("write golden file");
    println!("wrote {} bytes to {path}", table.len());
}
