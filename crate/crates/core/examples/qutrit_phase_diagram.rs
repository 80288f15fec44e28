//! Coarse phase diagram of the symmetric qutrit family, printed as a character map.

use pcubed::qutritlab::{phase_scan, PhaseGrid, ScanOptions};
use pcubed::prelude::*;

fn glyph(tag: Tag) -> char {
    match tag {
        Tag::Degradable => 'D',
        Tag::Antidegradable => 'A',
        Tag::Both => '=',
        Tag::Undegradable => '.',
        Tag::Indeterminate => '?',
    }
}

fn main() -> Result<()> {
    let grid = PhaseGrid::square(31, 31);
    let points = phase_scan(&grid, &ScanOptions::default())?;
    println!("rows: c from 1 down to -1/2; columns: b from -1/2 to 1");
    for j in (0..31).rev() {
        let line: String = (0..31).map(|i| glyph(points[i * 31 + j].verdict)).collect();
        println!("{:6.3} {line}", grid.c(j));
    }
    Ok(())
}
