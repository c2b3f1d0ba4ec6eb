// The four tokenizer modes on one line of code.

use qlog_bm25::tokenize::default_stopwords;
use qlog_bm25::{split_identifier, tokenize, TokenizerMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let line = "if err := parseHTTPResponse(resp_body, maxRetries2); err != nil {";
    for mode in TokenizerMode::ALL {
        println!("{:>2}: {:?}", mode.short_name(), tokenize(line, mode, default_stopwords()));
    }
    assert_eq!(split_identifier("parseHTTPResponse"), ["parse", "http", "response"]);
    assert_eq!(split_identifier("maxRetries2"), ["max", "retries", "2"]);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
