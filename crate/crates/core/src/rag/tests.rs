use proptest::prelude::*;

use super::*;
use crate::model::{GenerationParams, MatchTarget, ModelSpec, ScriptedBehavior, ScriptedRule};

fn chunk_of(text: &str) -> Chunk {
    Chunk {
        doc_id: "d".into(),
        seq: 0,
        text: text.into(),
        span: (0, text.chars().count()),
    }
}

// -- chunking ---------------------------------------------------------------

#[test]
fn chunk_fixed_alphabet_spans() {
    let text = "abcdefghijklmnopqrstuvwxyz";
    let chunks = chunk_fixed("d", text, 10, 2).unwrap();
    let spans: Vec<_> = chunks.iter().map(|c| c.span).collect();
    assert_eq!(spans, [(0, 10), (8, 18), (16, 26)]);
    assert_eq!(chunks[1].text, "ijklmnopqr");
    assert_eq!(chunks.iter().map(|c| c.seq).collect::<Vec<_>>(), [0, 1, 2]);
}

#[test]
fn chunk_fixed_short_and_empty() {
    let chunks = chunk_fixed("d", "short", 10, 0).unwrap();
    assert_eq!(chunks.len(), 1);
    assert_eq!(chunks[0].text, "short");
    assert!(chunk_fixed("d", "", 10, 2).unwrap().is_empty());
}

#[test]
fn chunk_fixed_rejects_bad_overlap() {
    assert!(chunk_fixed("d", "abc", 4, 4).is_err());
    assert!(chunk_fixed("d", "abc", 0, 0).is_err());
}

#[test]
fn chunk_paragraphs_packing() {
    // two 10-char paragraphs fit one 25-char chunk
    let text = "aaaaaaaaaa\n\nbbbbbbbbbb";
    let chunks = chunk_paragraphs("d", text, 25).unwrap();
    assert_eq!(chunks.len(), 1);
    assert_eq!(chunks[0].text, "aaaaaaaaaa\nbbbbbbbbbb");

    // two 20-char paragraphs overflow it
    let text = format!("{}\n\n{}", "a".repeat(20), "b".repeat(20));
    let chunks = chunk_paragraphs("d", &text, 25).unwrap();
    assert_eq!(chunks.len(), 2);

    // one 30-char paragraph falls back to fixed chunking
    let text = "c".repeat(30);
    let chunks = chunk_paragraphs("d", &text, 10).unwrap();
    assert_eq!(chunks.len(), 3);
    assert!(chunks.iter().all(|c| c.text.chars().count() == 10));
}

#[test]
fn chunk_paragraph_spans_are_document_relative() {
    let text = "first para\n\nsecond para here";
    let chunks = chunk_paragraphs("d", text, 16).unwrap();
    assert_eq!(chunks.len(), 2);
    let (s, e) = chunks[1].span;
    let slice: String = text.chars().skip(s).take(e - s).collect();
    assert_eq!(slice, "second para here");
}

proptest! {
    // Concatenating chunk 0 with each later chunk's suffix past the overlap
    // reproduces the source text.
    #[test]
    fn prop_chunk_reconstruction(
        text in proptest::collection::vec(any::<char>(), 0..200),
        size in 1usize..24,
        overlap_frac in 0usize..24,
    ) {
        let text: String = text.into_iter().collect();
        let overlap = overlap_frac % size;
        let chunks = chunk_fixed("d", &text, size, overlap).unwrap();

        let mut rebuilt = String::new();
        for (i, chunk) in chunks.iter().enumerate() {
            if i == 0 {
                rebuilt.push_str(&chunk.text);
            } else {
                rebuilt.extend(chunk.text.chars().skip(overlap));
            }
        }
        prop_assert_eq!(rebuilt, text);

        for chunk in &chunks {
            prop_assert!(chunk.text.chars().count() <= size);
        }
        for pair in chunks.windows(2) {
            prop_assert_eq!(pair[0].span.1 - pair[1].span.0, overlap);
        }
    }
}

// -- embeddings -------------------------------------------------------------

/// Independent oracle: textbook FNV-1a plus the sign rule, written without
/// reference to the implementation.
fn oracle_embed(text: &str, dim: usize) -> Vec<f64> {
    let mut values = vec![0.0f64; dim];
    for token in text
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
    {
        let mut h: u64 = 14695981039346656037;
        for b in token.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(1099511628211);
        }
        let idx = (h % dim as u64) as usize;
        values[idx] += if h & (1 << 63) == 0 { 1.0 } else { -1.0 };
    }
    let norm: f64 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in &mut values {
            *v /= norm;
        }
    }
    values
}

#[test]
fn embed_matches_independent_oracle() {
    for text in ["alpha beta", "Bulbasaur grass type", "x y z 123", "ONE one"] {
        let embedded = embed_hash(text, 256).unwrap();
        let expected = oracle_embed(text, 256);
        for (a, b) in embedded.values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{text}: {a} vs {b}");
        }
    }
}

#[test]
fn embed_empty_is_zero_vector() {
    let v = embed_hash("", 64).unwrap();
    assert!(v.is_zero());
    assert_eq!(v.l2_norm(), 0.0);
    assert_eq!(v.dim(), 64);
}

#[test]
fn embed_is_order_and_case_invariant() {
    let a = embed_hash("alpha beta", 256).unwrap();
    let b = embed_hash("beta ALPHA", 256).unwrap();
    assert!((cosine(&a, &b) - 1.0).abs() < 1e-9);
}

#[test]
fn embed_norm_is_unit_for_nonempty() {
    for text in ["hello", "a b c d e", "firewall iptables rules"] {
        let v = embed_hash(text, 256).unwrap();
        assert!((v.l2_norm() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn embed_rejects_small_dim() {
    assert!(embed_hash("x", 7).is_err());
}

// -- loaders ----------------------------------------------------------------

#[test]
fn load_txt_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    std::fs::write(&path, "hello").unwrap();
    let loaded = load_path(&path).unwrap();
    assert_eq!(loaded.documents.len(), 1);
    assert_eq!(loaded.documents[0].content, "hello");
}

#[test]
fn load_csv_rows_as_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pokemon.csv");
    std::fs::write(&path, "name,type\nBulbasaur,grass\nCharmander,fire\n").unwrap();
    let loaded = load_path(&path).unwrap();
    assert_eq!(loaded.documents.len(), 2);
    assert_eq!(loaded.documents[0].content, "name: Bulbasaur; type: grass");
    assert_eq!(loaded.documents[1].content, "name: Charmander; type: fire");
}

#[test]
fn load_directory_recursive_sorted_with_warnings() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("sub")).unwrap();
    std::fs::write(dir.path().join("sub/b.txt"), "b").unwrap();
    std::fs::write(dir.path().join("a.md"), "a").unwrap();
    std::fs::write(dir.path().join("skip.bin"), [0u8]).unwrap();
    let loaded = load_path(dir.path()).unwrap();
    let contents: Vec<_> = loaded.documents.iter().map(|d| d.content.as_str()).collect();
    assert_eq!(contents, ["a", "b"]);
    assert_eq!(loaded.warnings.len(), 1);
    assert!(loaded.warnings[0].contains("skip.bin"));
}

#[test]
fn load_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_path(dir.path()).unwrap().documents.is_empty());
}

#[test]
fn load_missing_path_is_io_error() {
    assert!(matches!(
        load_path("/nonexistent/nope.txt"),
        Err(crate::Error::Io { .. })
    ));
}

#[test]
fn url_fixture_load() {
    let fixture = UrlFixture::new(
        [("http://x.test/a".to_string(), "<p>Hi</p>".to_string())]
            .into_iter()
            .collect(),
    );
    let doc = load_url_fixture("http://x.test/a", &fixture).unwrap();
    assert_eq!(doc.content, "<p>Hi</p>");
    assert_eq!(doc.source, "http://x.test/a");

    let err = load_url_fixture("http://x.test/missing", &fixture).unwrap_err();
    assert!(err.to_string().contains("http://x.test/missing"));

    assert!(load_url_fixture("ftp://x.test/a", &fixture).is_err());
}

// -- html -------------------------------------------------------------------

#[test]
fn strip_html_examples() {
    assert_eq!(strip_html("<p>Hi <b>there</b></p>"), "Hi there");
    assert_eq!(strip_html("<script>x=1</script>Hello"), "Hello");
    assert_eq!(strip_html("a &amp; b"), "a & b");
}

#[test]
fn strip_html_style_and_entities() {
    assert_eq!(
        strip_html("<style>p { color: red }</style><p>&lt;kept&gt;</p>"),
        "<kept>"
    );
    assert_eq!(strip_html("&quot;q&quot; &apos;a&apos;"), "\"q\" 'a'");
}

#[test]
fn strip_html_collapses_whitespace() {
    assert_eq!(strip_html("<div>\n  a\n\n  b  </div>"), "a b");
}

#[test]
fn strip_html_no_tag_characters_survive() {
    let out = strip_html("<p class=\"x\">text<br/>more</p><SCRIPT>bad()</SCRIPT>");
    assert!(!out.contains('<') && !out.contains('>'));
    assert_eq!(out, "textmore");
}

// -- store ------------------------------------------------------------------

#[test]
fn store_add_assigns_monotone_ids() {
    let mut store = VectorStore::new(64);
    let ids = store
        .add(vec![chunk_of("one"), chunk_of("two"), chunk_of("three")])
        .unwrap();
    assert_eq!(ids, [0, 1, 2]);
    let more = store.add(vec![chunk_of("four"), chunk_of("five")]).unwrap();
    assert_eq!(more, [3, 4]);
}

#[test]
fn store_query_ranks_by_token_overlap() {
    let mut store = VectorStore::new(256);
    store
        .add(vec![
            chunk_of("firewall iptables rules"),
            chunk_of("cooking pasta recipe"),
        ])
        .unwrap();
    let results = store.query("iptables firewall", 1).unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0].record.chunk.text, "firewall iptables rules");
    assert!(results[0].score > 0.0);

    // the pasta chunk shares no tokens with the query
    let all = store.query("iptables firewall", 2).unwrap();
    assert!(all[1].score.abs() < 1e-12);
}

#[test]
fn store_query_empty_and_k_overflow() {
    let store = VectorStore::new(64);
    assert!(store.query("x", 3).unwrap().is_empty());

    let mut store = VectorStore::new(64);
    store.add(vec![chunk_of("a"), chunk_of("b")]).unwrap();
    assert_eq!(store.query("a", 10).unwrap().len(), 2);
}

#[test]
fn zero_vector_chunk_never_outranks_matches() {
    let mut store = VectorStore::new(64);
    let ids = store.add(vec![chunk_of("!!!"), chunk_of("alpha beta")]).unwrap();
    assert!(store.get(ids[0]).unwrap().vector.is_zero());
    let results = store.query("alpha", 2).unwrap();
    assert_eq!(results[0].record.record_id, ids[1]);
    assert_eq!(results[1].score, 0.0);
}

#[test]
fn store_save_load_round_trip_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");

    let mut store = VectorStore::new(32);
    let texts: Vec<String> = (0..10).map(|i| format!("document number {i} words")).collect();
    store
        .add(texts.iter().map(|t| chunk_of(t)).collect())
        .unwrap();

    let bytes = store.save(&path).unwrap();
    assert_eq!(bytes as u64, std::fs::metadata(&path).unwrap().len());

    let loaded = VectorStore::load(&path).unwrap();
    assert_eq!(loaded, store);

    // two saves are byte-identical
    let path2 = dir.path().join("s2.jsonl");
    loaded.save(&path2).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&path2).unwrap()
    );
}

#[test]
fn store_load_truncated_line_names_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    let mut store = VectorStore::new(16);
    store.add(vec![chunk_of("a"), chunk_of("b")]).unwrap();
    store.save(&path).unwrap();

    let mut content = std::fs::read_to_string(&path).unwrap();
    let keep = content.lines().next().unwrap().len() + 1;
    content.truncate(keep + 20); // cut into the middle of line 2
    std::fs::write(&path, content).unwrap();

    match VectorStore::load(&path) {
        Err(crate::Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error with line, got {other:?}"),
    }
}

// -- rag answer -------------------------------------------------------------

fn scripted_bulbasaur_model() -> ModelSpec {
    ModelSpec::scripted(
        "m",
        ScriptedBehavior::with_rules(vec![ScriptedRule::substring(
            MatchTarget::FullPrompt,
            "Bulbasaur",
            "Bulbasaur is a grass type.",
        )]),
    )
}

#[test]
fn rag_answer_passes_context_and_cites() {
    let mut store = VectorStore::new(256);
    store
        .add(vec![
            chunk_of("Bulbasaur is a dual-type Pokemon"),
            chunk_of("weather report for tuesday"),
            chunk_of("shopping list milk eggs"),
        ])
        .unwrap();
    let answer = rag_answer(
        "Tell me about Bulbasaur",
        &store,
        &scripted_bulbasaur_model(),
        2,
        &GenerationParams::default(),
    )
    .unwrap();
    assert_eq!(answer.answer, "Bulbasaur is a grass type.");
    assert_eq!(answer.citations.len(), 2);
    assert_eq!(answer.citations[0], 0);
    let expected = store.query("Tell me about Bulbasaur", 2).unwrap();
    let expected_ids: Vec<u64> = expected.iter().map(|r| r.record.record_id).collect();
    assert_eq!(answer.citations, expected_ids);
}

#[test]
fn rag_answer_empty_store_rejected() {
    let store = VectorStore::new(256);
    assert!(matches!(
        rag_answer(
            "q",
            &store,
            &scripted_bulbasaur_model(),
            1,
            &GenerationParams::default()
        ),
        Err(crate::Error::Validation(_))
    ));
}

// store_query equals the brute-force oracle by construction; the dedicated
// randomized comparison lives in the acceptance suite.
