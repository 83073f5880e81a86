//! Seeded synthetic corpus: each category owns a disjoint set of signature
//! words, and descriptions mix those with a shared noise pool.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::TaskRecord;
use crate::rng::Rng;

pub struct CategorySpec {
    pub name: &'static str,
    /// Imperative verbs; every sentence starts with one.
    pub verbs: [&'static str; 3],
    pub nouns: [&'static str; 12],
    pub employers: [&'static str; 3],
    /// Mean payment in USD.
    pub payment: f64,
    /// Mean minutes to finish.
    pub minutes: f64,
}

impl CategorySpec {
    pub fn signature(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.verbs.iter().chain(self.nouns.iter()).copied()
    }
}

pub const CATEGORIES: [CategorySpec; 5] = [
    CategorySpec {
        name: "Sign up",
        verbs: ["register", "subscribe", "enroll"],
        nouns: [
            "account", "email", "password", "username", "profile", "newsletter", "form", "membership", "inbox", "login",
            "captcha", "verification",
        ],
        employers: ["emp-signup-1", "emp-signup-2", "emp-shared"],
        payment: 0.10,
        minutes: 5.0,
    },
    CategorySpec {
        name: "Search, Click, Engage",
        verbs: ["search", "click", "browse"],
        nouns: [
            "keyword", "result", "link", "engine", "query", "banner", "advert", "sponsor", "listing", "ranking",
            "bookmark", "tab",
        ],
        employers: ["emp-search-1", "emp-search-2", "emp-shared"],
        payment: 0.08,
        minutes: 3.0,
    },
    CategorySpec {
        name: "Mobile Applications",
        verbs: ["download", "install", "launch"],
        nouns: [
            "app", "phone", "android", "device", "store", "screenshot", "tablet", "version", "update", "game", "iphone",
            "smartphone",
        ],
        employers: ["emp-mobile-1", "emp-mobile-2", "emp-shared"],
        payment: 0.25,
        minutes: 10.0,
    },
    CategorySpec {
        name: "Youtube/Vimeo",
        verbs: ["watch", "view", "share"],
        nouns: [
            "video", "channel", "clip", "comment", "playlist", "minute", "thumbnail", "movie", "vimeo", "youtube",
            "trailer", "episode",
        ],
        employers: ["emp-video-1", "emp-video-2", "emp-shared"],
        payment: 0.05,
        minutes: 4.0,
    },
    CategorySpec {
        name: "Blog/Website Owners",
        verbs: ["write", "post", "publish"],
        nouns: [
            "article", "blog", "review", "paragraph", "website", "forum", "topic", "word", "sentence", "author",
            "content", "draft",
        ],
        employers: ["emp-blog-1", "emp-blog-2", "emp-shared"],
        payment: 0.40,
        minutes: 20.0,
    },
];

/// Shared filler: no stopwords, no signature words.
pub const NOISE: [&str; 100] = [
    "quick", "simple", "daily", "bonus", "worker", "task", "job", "reward", "fast", "easy", "careful", "honest",
    "correct", "exact", "proper", "complete", "final", "extra", "small", "large", "short", "long", "clear", "valid",
    "unique", "original", "native", "english", "local", "global", "special", "random", "regular", "total", "single",
    "double", "basic", "standard", "premium", "normal", "active", "real", "genuine", "personal", "public", "private",
    "online", "digital", "modern", "classic", "current", "recent", "previous", "next", "primary", "secondary",
    "official", "popular", "famous", "general", "specific", "detail", "instruction", "requirement", "rule", "guideline",
    "deadline", "proof", "evidence", "report", "note", "hint", "tip", "step", "stage", "phase", "round", "batch",
    "group", "team", "member", "user", "customer", "client", "visitor", "friend", "country", "city", "region", "area",
    "market", "brand", "product", "service", "company", "business", "office", "budget", "price", "value",
];

const COUNTRIES: [&str; 8] = ["US", "GB", "DE", "IN", "CA", "AU", "FR", "BR"];

fn pick<'a>(rng: &mut Rng, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len())]
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Description tokens grouped into sentences. 60% of tokens (rounded) come
/// from the signature set, sentence openers included.
fn description(rng: &mut Rng, spec: &CategorySpec) -> Vec<Vec<&'static str>> {
    let total = 20 + rng.below(21);
    let signature_count = (total * 3 + 2) / 5;
    // sentence lengths of 5..=8, the last one absorbing the remainder
    let mut lengths = Vec::new();
    let mut left = total;
    while left > 0 {
        let len = if left <= 8 { left } else { (5 + rng.below(4)).min(left - 5).max(5) };
        lengths.push(len);
        left -= len;
    }
    let openers = lengths.len();
    // non-opener slots, some of which get signature words
    let mut slots: Vec<bool> = (0..total - openers).map(|i| i < signature_count - openers).collect();
    rng.shuffle(&mut slots);
    let signature: Vec<&str> = spec.signature().collect();
    let mut slot = slots.into_iter();
    lengths
        .into_iter()
        .map(|len| {
            let mut s = Vec::with_capacity(len);
            s.push(pick(rng, &spec.verbs));
            for _ in 1..len {
                let w = if slot.next().unwrap_or(false) { pick(rng, &signature) } else { pick(rng, &NOISE) };
                s.push(w);
            }
            s
        })
        .collect()
}

fn render_sentence(words: &[&str]) -> String {
    let mut s = capitalize(words[0]);
    for w in &words[1..] {
        s.push(' ');
        s.push_str(w);
    }
    s.push('.');
    s
}

/// Markup layout is drawn independently of the category.
fn render_html(rng: &mut Rng, sentences: &[String]) -> String {
    match rng.below(3) {
        0 => {
            let mut out = String::new();
            let mut i = 0;
            while i < sentences.len() {
                let take = 1 + rng.below(2);
                let end = (i + take).min(sentences.len());
                out.push_str("<p>");
                out.push_str(&sentences[i..end].join(" "));
                out.push_str("</p>");
                i = end;
            }
            out
        }
        1 => {
            let mut out = String::from("<p>");
            out.push_str(&sentences[0]);
            out.push_str("</p><ul>");
            for s in &sentences[1..] {
                out.push_str("<li>");
                out.push_str(s);
                out.push_str("</li>");
            }
            out.push_str("</ul>");
            out
        }
        _ => sentences.join("\n"),
    }
}

/// `per_category` records for each of the first `categories` categories
/// (at most 5), category-major order.
pub fn generate_synthetic_corpus(seed: u64, categories: usize, per_category: usize) -> Vec<TaskRecord> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::with_capacity(categories * per_category);
    for (c, spec) in CATEGORIES.iter().take(categories).enumerate() {
        for i in 0..per_category {
            let sentences: Vec<String> = description(&mut rng, spec).iter().map(|s| render_sentence(s)).collect();
            let html = render_html(&mut rng, &sentences);
            let mut rec = TaskRecord::new(&format!("syn-{c}-{i:03}"), spec.name, &html);
            rec.title = Some(format!("{} {}", capitalize(pick(&mut rng, &spec.verbs)), pick(&mut rng, &spec.nouns)));
            rec.proof = Some(format!("Provide a screenshot of the {}.", pick(&mut rng, &spec.nouns)));
            rec.employer = Some(pick(&mut rng, &spec.employers).to_string());
            let jitter = |rng: &mut Rng, mean: f64| mean * (0.5 + rng.unit());
            rec.payment = Some(round_to(jitter(&mut rng, spec.payment), 100.0));
            rec.time_to_finish = Some(round_to(jitter(&mut rng, spec.minutes), 10.0).max(1.0));
            rec.time_to_rate = Some((1 + rng.below(7)) as f64);
            rec.positions = Some(10 + rng.below(491) as u64);
            let positions = rec.positions.unwrap_or(0);
            rec.jobs_done = Some(rng.below(positions as usize + 1) as u64);
            rec.success_rate = Some(round_to(0.5 + 0.5 * rng.unit(), 1000.0));
            let n_countries = rng.below(3);
            let mut countries: Vec<String> = (0..n_countries).map(|_| pick(&mut rng, &COUNTRIES).to_string()).collect();
            countries.sort();
            countries.dedup();
            rec.countries = Some(countries);
            out.push(rec);
        }
    }
    out
}

fn round_to(v: f64, scale: f64) -> f64 {
    libm::round(v * scale) / scale
}
