// Writes the named instances as canonical instance files and reads them
// back.
//
//     cargo run --example instance_files -- [DIR]

use std::path::{Path, PathBuf};

use rmt_core::cli::format::{digest, read_instance, to_canonical};
use rmt_core::instance::named;

pub fn run_example() -> rmt_core::Result<()> {
    write_all(&std::env::temp_dir().join("rmt-instances"))
}

fn write_all(dir: &Path) -> rmt_core::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, inst) in named::all() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, to_canonical(&inst))?;
        assert_eq!(read_instance(&path)?, inst);
        println!("{}  {}", &digest(&inst)[..16], path.display());
    }
    Ok(())
}

fn main() -> rmt_core::Result<()> {
    match std::env::args().nth(1) {
        Some(dir) => write_all(&PathBuf::from(dir)),
        None => run_example(),
    }
}
