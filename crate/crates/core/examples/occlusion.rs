// q sweep plus df-bin occlusion: which document-frequency band carries the
// retrieval signal.

use qlog_bm25::eval::{df_bin_occlusion, q_sweep, DfBin, DEFAULT_GRID};
use qlog_bm25::synthetic::{hapax_collection, HapaxSpec};
use qlog_bm25::{build_index, TokenizerMode};

pub fn run_example() -> Result<f64, Box<dyn std::error::Error>> {
    let c = hapax_collection(HapaxSpec::default(), 5);
    let base = build_index(&c.corpus, TokenizerMode::T1Whitespace, Default::default())?;

    let sweep = q_sweep(&base, &c.queries, &c.qrels, &DEFAULT_GRID)?;
    sweep.write_csv(&mut std::io::stdout())?;
    println!("q_opt = {}", sweep.q_opt);

    let bins = DfBin::parse_list("1,2,3-5,6-20,21-100,101-500,501+")?;
    let report = df_bin_occlusion(&base, &c.queries, &c.qrels, &bins, Some(sweep.q_opt))?;
    report.write_tsv(&mut std::io::stdout())?;
    Ok(sweep.q_opt)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
