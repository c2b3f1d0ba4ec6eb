#[allow(dead_code)]
mod build_and_search {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/build_and_search.rs"));
}

#[allow(dead_code)]
mod qlog_rescale {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qlog_rescale.rs"));
}

#[allow(dead_code)]
mod tokenizer_modes {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tokenizer_modes.rs"));
}

#[allow(dead_code)]
mod predict_q {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/predict_q.rs"));
}

#[allow(dead_code)]
mod evaluate_bootstrap {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/evaluate_bootstrap.rs"));
}

#[allow(dead_code)]
mod occlusion {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/occlusion.rs"));
}

#[allow(dead_code)]
mod token_budget {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/token_budget.rs"));
}

#[allow(dead_code)]
mod dph_baseline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dph_baseline.rs"));
}

#[allow(dead_code)]
mod bench {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bench.rs"));
}

#[allow(dead_code)]
mod cli {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli.rs"));
}


#[test]
fn build_and_search_example_runs() {
    build_and_search::run_example().expect("build_and_search example should run");
}

#[test]
fn qlog_rescale_example_runs() {
    qlog_rescale::run_example().expect("qlog_rescale example should run");
}

#[test]
fn tokenizer_modes_example_runs() {
    tokenizer_modes::run_example().expect("tokenizer_modes example should run");
}

#[test]
fn predict_q_example_runs() {
    predict_q::run_example().expect("predict_q example should run");
}

#[test]
fn evaluate_bootstrap_example_runs() {
    evaluate_bootstrap::run_example().expect("evaluate_bootstrap example should run");
}

#[test]
fn occlusion_example_runs() {
    occlusion::run_example().expect("occlusion example should run");
}

#[test]
fn token_budget_example_runs() {
    token_budget::run_example().expect("token_budget example should run");
}

#[test]
fn dph_baseline_example_runs() {
    dph_baseline::run_example().expect("dph_baseline example should run");
}

#[test]
fn bench_example_runs() {
    bench::run_example().expect("bench example should run");
}

#[test]
fn cli_example_runs() {
    cli::run_example().expect("cli example should run");
}
