// Drive the command-line interface end to end on temporary files.

use qlog_bm25::cli;
use qlog_bm25::synthetic::{hapax_collection, HapaxSpec};
use qlog_bm25::TextFormat;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("qlog-bm25-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let c = hapax_collection(HapaxSpec { n_docs: 300, n_queries: 30, ..Default::default() }, 1);
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    c.corpus.write(&dir.join("corpus.jsonl"), TextFormat::Jsonl)?;
    c.queries.write(&dir.join("queries.tsv"), TextFormat::Tsv)?;
    c.qrels.write(&dir.join("qrels.tsv"))?;

    let steps: Vec<Vec<String>> = vec![
        vec!["build".into(), "--corpus".into(), p("corpus.jsonl"), "--mode".into(), "t1".into(), "--out".into(), p("bm25.idx")],
        vec!["rescale".into(), "--index".into(), p("bm25.idx"), "--q".into(), "1.0".into()],
        vec!["rescale".into(), "--index".into(), p("bm25.idx"), "--q".into(), "0.2".into(), "--out".into(), p("qlog.idx")],
        vec!["search".into(), "--index".into(), p("qlog.idx"), "--queries".into(), p("queries.tsv"), "--k".into(), "10".into(), "--out".into(), p("run.tsv")],
        vec!["sweep".into(), "--index".into(), p("bm25.idx"), "--queries".into(), p("queries.tsv"), "--qrels".into(), p("qrels.tsv")],
        vec!["predict-q".into(), "--corpus".into(), p("corpus.jsonl"), "--mode".into(), "t1".into()],
        vec!["eval".into(), "--index".into(), p("bm25.idx"), "--queries".into(), p("queries.tsv"), "--qrels".into(), p("qrels.tsv"), "--q".into(), "0.2".into(), "--resamples".into(), "2000".into()],
        vec!["occlusion".into(), "--index".into(), p("bm25.idx"), "--queries".into(), p("queries.tsv"), "--qrels".into(), p("qrels.tsv"), "--bins".into(), "1,2-50,51+".into()],
    ];
    for args in steps {
        println!("$ qlog-bm25 {}", args.join(" "));
        let code = cli::run(std::iter::once("qlog-bm25".to_string()).chain(args));
        if code != 0 {
            return Err(format!("exit code {code}").into());
        }
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
