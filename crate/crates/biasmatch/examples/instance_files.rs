//! Instance files: a line-oriented text format (`k n r` header, one edge
//! per line with its colour, `#` comments) and a JSON mirror. Both
//! round-trip losslessly and report parse failures by line number.
//!
//! Run with: cargo run --example instance_files

use biasmatch::instance::Instance;

fn main() -> biasmatch::Result<()> {
    // Parse a small instance from text. Comments are carried through.
    let text = "\
# a hand-written demo instance
3 6 2
0 1 2 1
0 4 5 1
3 4 5 2
1 2 3 2
";
    let instance = Instance::from_text(text)?;
    println!(
        "parsed: k={} n={} r={} with {} edges and {} comment(s)",
        instance.hypergraph.k(),
        instance.hypergraph.n(),
        instance.colouring.r(),
        instance.hypergraph.edges().len(),
        instance.comments.len()
    );

    // Text round-trip is canonical: edges come back lexicographically
    // sorted, one per line.
    let rendered = instance.to_text()?;
    assert_eq!(Instance::from_text(&rendered)?, instance);
    print!("canonical text form:\n{rendered}");

    // The JSON mirror carries the same data plus optional construction
    // metadata from the generators.
    let json = instance.to_json()?;
    assert_eq!(Instance::from_json(&json)?, instance);
    println!("json form is {} bytes and round-trips", json.len());

    // Files dispatch on extension: .json writes the mirror, anything else
    // the text form.
    let dir = std::env::temp_dir();
    let text_path = dir.join("biasmatch_demo.txt");
    let json_path = dir.join("biasmatch_demo.json");
    instance.write(&text_path)?;
    instance.write(&json_path)?;
    assert_eq!(Instance::read(&text_path)?, instance);
    assert_eq!(Instance::read(&json_path)?, instance);
    println!("file round-trips via {} and {}", text_path.display(), json_path.display());
    std::fs::remove_file(&text_path).ok();
    std::fs::remove_file(&json_path).ok();

    // Malformed input names the offending line.
    let bad = "3 6 2\n0 1 2 1\n0 1 9 1\n";
    match Instance::from_text(bad) {
        Err(e) => println!("rejected bad input: {e}"),
        Ok(_) => unreachable!("vertex 9 is out of range for n=6"),
    }

    Ok(())
}
