//! Holds the `acceptance` test target; run it with `cargo test -p qlog-bm25-acceptance`.
