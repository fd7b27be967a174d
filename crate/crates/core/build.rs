use std::fmt::Write as _;
use std::path::Path;
use std::{env, fs};

fn listing(dir: &Path) -> String {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("reading {}: {e}", dir.display()))
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "pc"))
        .collect();
    files.sort();
    let mut out = String::from("&[\n");
    for path in files {
        let family: u32 = path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(|s| s.parse().ok())
            .unwrap_or_else(|| panic!("corpus file {} is not named NNN.pc", path.display()));
        writeln!(
            out,
            "    ({family}, include_str!({:?})),",
            path.display().to_string()
        )
        .unwrap();
    }
    out.push(']');
    out
}

fn main() {
    let root = Path::new(&env::var("CARGO_MANIFEST_DIR").unwrap()).join("data");
    println!("cargo:rerun-if-changed={}", root.display());
    let code = format!(
        "static FAMILY_SOURCES: &[(u32, &str)] = {};\nstatic CP_SOURCES: &[(u32, &str)] = {};\n",
        listing(&root.join("families")),
        listing(&root.join("cp")),
    );
    let out = Path::new(&env::var("OUT_DIR").unwrap()).join("corpus_files.rs");
    fs::write(out, code).expect("writing corpus listing");
}
