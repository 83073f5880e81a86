use std::collections::BTreeSet;

use proptest::prelude::*;
use taskscope_core::corpus::{strip_html, MicroTask, TaskRecord};
use taskscope_core::eval::{compute_metrics, stratified_folds};
use taskscope_core::features::{
    content_vector, fit_content_model, sentiment, structural_features, ContentConfig, FeatureMatrix, SentimentLexicon,
};
use taskscope_core::learn::{train, Algorithm, GaussianNb, LearnerConfig, MultinomialNb};
use taskscope_core::text::{count_syllables, tokenize, TokenizeOptions};

const POOL: &[&str] = &[
    "click", "the", "banner", "and", "register", "beautiful", "account", "please", "watch", "video", "quickly", "a",
    "website", "of", "review", "to", "download", "application", "it", "comment", "honestly", "simple", "you", "good",
    "bad", "terrible", "excellent", "search", "keyword", "result", "complicated", "information", "newsletter",
];

fn task(id: &str, html: &str) -> MicroTask {
    MicroTask::from_record(TaskRecord::new(id, "c", html)).unwrap().0
}

fn sentence() -> impl Strategy<Value = String> {
    (prop::collection::vec(prop::sample::select(POOL), 4..16), prop::bool::ANY).prop_map(|(words, comma)| {
        let mut s = String::new();
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                s.push_str(if comma && i == 2 { ", " } else { " " });
            }
            if i == 0 {
                let mut c = w.chars();
                s.extend(c.next().unwrap().to_uppercase());
                s.push_str(c.as_str());
            } else {
                s.push_str(w);
            }
        }
        s.push('.');
        s
    })
}

/// Plain-text description of at least 100 words, in one or more lines.
fn long_text() -> impl Strategy<Value = String> {
    prop::collection::vec((sentence(), prop::bool::weighted(0.2)), 12..20)
        .prop_map(|parts| {
            let mut out = String::new();
            for (i, (s, newline)) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(if *newline { "\n" } else { " " });
                }
                out.push_str(s);
            }
            out
        })
        .prop_filter("at least 100 words", |t| t.split_whitespace().count() >= 100)
}

fn markup() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        Just("<p>".to_string()),
        Just("</p>".to_string()),
        Just("<li>".to_string()),
        Just("<ul>".to_string()),
        Just("<br/>".to_string()),
        Just("<a href='http://Ex.com/x'>".to_string()),
        Just("</a>".to_string()),
        Just("&amp;".to_string()),
        Just("&lt;b&gt;".to_string()),
        Just("&#60;/p&#62;".to_string()),
        Just("<".to_string()),
        Just(">".to_string()),
        Just("\n\n".to_string()),
        "[a-z ,.]{0,12}",
    ];
    prop::collection::vec(piece, 0..20).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strip_html_idempotent_and_tag_free(raw in prop_oneof![markup(), any::<String>()]) {
        let (text, _) = strip_html(&raw);
        let (again, _) = strip_html(&text);
        prop_assert_eq!(&again, &text);
        let chars: Vec<char> = text.chars().collect();
        for w in chars.windows(2) {
            prop_assert!(!(w[0] == '<' && (w[1].is_ascii_alphabetic() || w[1] == '/')), "{:?}", text);
        }
    }

    #[test]
    fn tokenize_normalization_is_a_fixed_point(text in "[A-Za-z ,.!?']{0,80}") {
        for opts in [TokenizeOptions::WORDS, TokenizeOptions { stem: false, ..TokenizeOptions::ALL }] {
            let once: Vec<String> = tokenize(&text, opts).normalized().map(str::to_string).collect();
            let joined = once.join(" ");
            let twice: Vec<String> = tokenize(&joined, opts).normalized().map(str::to_string).collect();
            prop_assert_eq!(once, twice);
        }
    }

    #[test]
    fn syllables_at_least_one(word in "[a-zA-Z]{1,20}") {
        prop_assert!(count_syllables(&word) >= 1);
    }

    #[test]
    fn sentiment_in_range_and_flips(words in prop::collection::vec(prop::sample::select(POOL), 0..30)) {
        let text = words.join(" ");
        let lex = SentimentLexicon::from_pairs([("good", 1), ("excellent", 1), ("bad", -1), ("terrible", -1), ("honestly", 1)]);
        let s = sentiment(&text, &lex);
        prop_assert!((-1.0..=1.0).contains(&s));
        prop_assert_eq!(sentiment(&text, &lex.flipped()), -s);
    }

    #[test]
    fn tfidf_nonnegative_unit_norm(docs in prop::collection::vec(prop::collection::vec(prop::sample::select(POOL), 1..12), 2..10)) {
        let tasks: Vec<MicroTask> = docs.iter().enumerate().map(|(i, d)| task(&i.to_string(), &d.join(" "))).collect();
        let refs: Vec<&MicroTask> = tasks.iter().collect();
        let model = fit_content_model(&refs, &ContentConfig::default()).unwrap();
        for t in &tasks {
            let v = content_vector(&model, t);
            let dense = v.to_dense();
            prop_assert!(dense.iter().all(|&w| w >= 0.0));
            let norm = v.norm();
            prop_assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9, "norm {}", norm);
        }
    }

    #[test]
    fn content_vocabulary_ignores_training_order(
        docs in prop::collection::vec(prop::collection::vec(prop::sample::select(POOL), 1..12), 2..10),
        seed in any::<u64>(),
    ) {
        let tasks: Vec<MicroTask> = docs.iter().enumerate().map(|(i, d)| task(&i.to_string(), &d.join(" "))).collect();
        let mut refs: Vec<&MicroTask> = tasks.iter().collect();
        let config = ContentConfig { max_features: 7, ..ContentConfig::default() };
        let a = fit_content_model(&refs, &config).unwrap();
        taskscope_core::rng::Rng::new(seed).shuffle(&mut refs);
        let b = fit_content_model(&refs, &config).unwrap();
        prop_assert_eq!(a.terms(), b.terms());
        prop_assert!(a.len() <= 7);
        for term in a.terms() {
            prop_assert!(a.doc_freq(term).unwrap() >= 2);
        }
    }

    #[test]
    fn weighted_f1_is_support_weighted_mean(confusion in prop::collection::vec(prop::collection::vec(0usize..20, 4), 4)) {
        let classes: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let m = compute_metrics(&confusion, &classes);
        let n: usize = confusion.iter().flatten().sum();
        let expected = if n == 0 {
            0.0
        } else {
            m.per_class.iter().map(|c| c.f1 * c.support as f64).sum::<f64>() / n as f64
        };
        prop_assert!((m.weighted_f1 - expected).abs() < 1e-12);
        for (c, row) in m.per_class.iter().zip(&confusion) {
            prop_assert_eq!(c.support, row.iter().sum::<usize>());
            prop_assert!((0.0..=1.0).contains(&c.f1));
        }
    }

    #[test]
    fn naive_bayes_posteriors_sum_to_one(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 4..20),
        x in prop::collection::vec(0.0f64..10.0, 3),
    ) {
        let labels: Vec<usize> = (0..rows.len()).map(|i| i % 3).collect();
        let g = GaussianNb::fit(&rows, &labels, 3, 1e-9).posteriors(&x);
        let m = MultinomialNb::fit(&rows, &labels, 3, 1.0).posteriors(&x);
        for p in [g, m] {
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}

proptest! {
    // the duplication suite is pinned at 50 texts
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn structural_ratios_survive_duplication(text in long_text()) {
        let single = structural_features(&task("a", &text));
        let double = structural_features(&task("b", &format!("{text}\n\n{text}")));
        let (s, d) = (single.to_array(), double.to_array());
        prop_assert_eq!(d[0], 2.0 * s[0]);
        prop_assert_eq!(d[1], 2.0 * s[1]);
        for i in 2..9 {
            prop_assert!((d[i] - s[i]).abs() < 1e-9, "feature {} {} vs {}", i, s[i], d[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn folds_partition_and_balance(
        labels in prop::collection::vec(0u8..4, 10..120),
        k in prop::sample::select(vec![2usize, 5, 10]),
        seed in any::<u64>(),
    ) {
        let y: Vec<String> = labels.iter().map(|l| format!("c{l}")).collect();
        let folds = stratified_folds(&y, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..y.len()).collect::<Vec<_>>());
        for class in y.iter().collect::<BTreeSet<_>>() {
            let counts: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| &y[i] == class).count()).collect();
            prop_assert!(counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1);
        }
    }
}

/// Random integer-valued rows with labels that are a function of the row,
/// so the data is consistent even when rows repeat.
fn consistent_data() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<String>)> {
    prop::collection::vec(prop::collection::vec(0u8..6, 3), 6..40).prop_map(|rows| {
        let labels = rows.iter().map(|r| format!("c{}", (r[0] as usize * 7 + r[1] as usize * 3 + r[2] as usize) % 3)).collect();
        (rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect(), labels)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn trees_and_forests_fit_consistent_data((rows, labels) in consistent_data(), seed in any::<u64>()) {
        prop_assume!(labels.iter().collect::<BTreeSet<_>>().len() >= 2);
        let x = FeatureMatrix::from_rows(rows.clone()).unwrap();
        let config = LearnerConfig { tree_min_leaf: 1, ..LearnerConfig::default() };
        for algorithm in [Algorithm::Tree, Algorithm::Forest, Algorithm::Knn] {
            let model = train(algorithm, &x, &labels, &config, seed).unwrap();
            let predicted = model.predict_rows(&rows).unwrap();
            let correct = predicted.iter().zip(&labels).filter(|(p, y)| &p.label == *y).count();
            prop_assert_eq!(correct, rows.len(), "{}", algorithm);
        }
    }
}
