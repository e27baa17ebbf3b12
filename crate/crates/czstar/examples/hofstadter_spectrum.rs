//! Spectrum at one flux and a small butterfly as CSV.

use czstar::phase::FluxRatio;
use czstar::tbm::{butterfly_sweep, spectrum_rows, write_csv, HamiltonianKind, HamiltonianSpec, SignConvention};

fn main() -> czstar::Result<()> {
    let spec = HamiltonianSpec::new(HamiltonianKind::H, FluxRatio::new(1, 3)?);
    for row in spectrum_rows(&spec)? {
        println!("E_{} = {:+.6}", row.index, row.energy);
    }
    let rows = butterfly_sweep(5, HamiltonianKind::H, SignConvention::MinusPiPhi)?;
    write_csv(std::io::stdout().lock(), &rows)
}
