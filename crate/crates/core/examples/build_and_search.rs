// Build a BM25 index over a handful of code snippets, save it, reload it
// and run a query.

use qlog_bm25::{build_index, load_index, save_index, top_k, Corpus, TokenizerMode};

const SNIPPETS: &[(&str, &str)] = &[
    ("http/server.go", "func (s *Server) ListenAndServe() error { return s.serve(ln) }"),
    ("http/client.go", "func (c *Client) Do(req *Request) (*Response, error)"),
    ("auth/middleware.go", "func AuthMiddleware(next http.Handler) http.Handler"),
    ("auth/token.go", "func ParseBearerToken(header string) (string, error)"),
    ("db/pool.go", "func NewConnPool(size int) *ConnPool"),
];

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let corpus = Corpus::from_pairs(SNIPPETS.iter().copied())?;
    let mode = TokenizerMode::T2IdentifierAware;
    let index = build_index(&corpus, mode, Default::default())?;

    let dir = std::env::temp_dir().join(format!("qlog-bm25-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("snippets.idx");
    save_index(&index, &path)?;
    let index = load_index(&path)?;
    std::fs::remove_dir_all(&dir)?;

    println!("{} docs, {} terms, {} stored weights", index.num_docs(), index.num_terms(), index.nnz());
    let run = top_k(&index, "q1", "bearer token", mode, 3)?;
    for (rank, hit) in run.hits.iter().enumerate() {
        println!("{}\t{}\t{:.4}", rank + 1, hit.doc_id, hit.score);
    }
    assert_eq!(run.hits[0].doc_id, "auth/token.go");
    Ok(run.doc_ids().map(String::from).collect())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
