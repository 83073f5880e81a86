//! Tolerant tag scanner: turns sloppy task markup into plain text plus the
//! handful of structural facts the features need.

use alloc::string::String;
use alloc::vec::Vec;

use super::DocStructure;
use crate::text::word_count;

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "br", "center", "dd", "div", "dl", "dt", "figcaption",
    "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol",
    "p", "pre", "section", "table", "title", "tr", "ul",
];

const RAW_TEXT_TAGS: &[&str] = &["script", "style"];

struct Tag<'a> {
    name: String,
    closing: bool,
    attrs: &'a str,
}

/// Strip markup from `raw`, returning visible text and structural metadata.
///
/// Block elements break lines and `<p>` separates paragraphs. Input without
/// any block-level tag is treated as plain text whose own newlines are line
/// breaks; otherwise source newlines are ordinary whitespace.
pub fn strip_html(raw: &str) -> (String, DocStructure) {
    let html_mode = has_block_tag(raw);
    let mut buf = String::with_capacity(raw.len());
    let mut bullet_count = 0;
    let mut url_hosts = Vec::new();

    let bytes = raw.as_bytes();
    let mut i = 0;
    let mut text_start = 0;
    while i < bytes.len() {
        if bytes[i] != b'<' || !starts_markup(&bytes[i + 1..]) {
            i += 1;
            continue;
        }
        push_text(&mut buf, &raw[text_start..i], html_mode);
        let rest = &raw[i..];
        if let Some(body) = rest.strip_prefix("<!--") {
            i += body.find("-->").map_or(rest.len(), |e| e + 7);
            text_start = i;
            continue;
        }
        let end = tag_end(rest);
        let tag = parse_tag(&rest[..end]);
        i += end;
        if let Some(tag) = tag {
            if !tag.closing && RAW_TEXT_TAGS.contains(&tag.name.as_str()) {
                i += skip_raw_text(&raw[i..], &tag.name);
            }
            if !tag.closing && tag.name == "li" {
                bullet_count += 1;
            }
            if !tag.closing {
                if let Some(host) = attr_value(tag.attrs, "href").and_then(|v| url_host(&decode_entities(v))) {
                    url_hosts.push(host);
                }
            }
            match tag.name.as_str() {
                "p" => ensure_breaks(&mut buf, 2),
                "br" => buf.push('\n'),
                name if BLOCK_TAGS.contains(&name) => ensure_breaks(&mut buf, 1),
                _ => {}
            }
        }
        text_start = i;
    }
    push_text(&mut buf, &raw[text_start..], html_mode);

    let text = protect(&normalize_layout(&buf));
    let structure = structure_of(&text, bullet_count, url_hosts);
    (text, structure)
}

/// Make `buf` end in at least `n` line breaks, ignoring trailing blanks.
fn ensure_breaks(buf: &mut String, n: usize) {
    let have = buf.chars().rev().filter(|c| *c != ' ' && *c != '\t').take_while(|c| *c == '\n').count();
    for _ in have..n {
        buf.push('\n');
    }
}

fn starts_markup(after_lt: &[u8]) -> bool {
    matches!(after_lt.first(), Some(c) if c.is_ascii_alphabetic() || matches!(c, b'/' | b'!' | b'?'))
}

fn has_block_tag(raw: &str) -> bool {
    let bytes = raw.as_bytes();
    let mut i = 0;
    while let Some(off) = raw[i..].find('<') {
        let at = i + off;
        if starts_markup(&bytes[at + 1..]) {
            let end = tag_end(&raw[at..]);
            if let Some(tag) = parse_tag(&raw[at..at + end]) {
                if BLOCK_TAGS.contains(&tag.name.as_str()) {
                    return true;
                }
            }
            i = at + end.max(1);
        } else {
            i = at + 1;
        }
    }
    false
}

/// Byte length of the tag starting at `s[0] == '<'`, honoring quoted
/// attribute values. An unterminated tag swallows the rest of the input.
fn tag_end(s: &str) -> usize {
    let mut quote: Option<u8> = None;
    for (i, &b) in s.as_bytes().iter().enumerate().skip(1) {
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => return i + 1,
            None => {}
        }
    }
    s.len()
}

fn parse_tag(s: &str) -> Option<Tag<'_>> {
    let inner = s.strip_prefix('<')?;
    let inner = inner.strip_suffix('>').unwrap_or(inner);
    if inner.starts_with('!') || inner.starts_with('?') {
        return None;
    }
    let (closing, inner) = match inner.strip_prefix('/') {
        Some(rest) => (true, rest),
        None => (false, inner),
    };
    let name_len = inner.find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == ':')).unwrap_or(inner.len());
    if name_len == 0 {
        return None;
    }
    Some(Tag { name: inner[..name_len].to_ascii_lowercase(), closing, attrs: &inner[name_len..] })
}

fn skip_raw_text(s: &str, name: &str) -> usize {
    let lower = s.to_ascii_lowercase();
    let mut needle = String::from("</");
    needle.push_str(name);
    match lower.find(&needle) {
        Some(start) => start + tag_end(&s[start..]),
        None => s.len(),
    }
}

fn attr_value<'a>(attrs: &'a str, wanted: &str) -> Option<&'a str> {
    let b = attrs.as_bytes();
    let mut i = 0;
    while i < b.len() {
        while i < b.len() && (b[i].is_ascii_whitespace() || b[i] == b'/') {
            i += 1;
        }
        let name_start = i;
        while i < b.len() && !b[i].is_ascii_whitespace() && b[i] != b'=' && b[i] != b'/' {
            i += 1;
        }
        let name = &attrs[name_start..i];
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = "";
        if i < b.len() && b[i] == b'=' {
            i += 1;
            while i < b.len() && b[i].is_ascii_whitespace() {
                i += 1;
            }
            if i < b.len() && (b[i] == b'"' || b[i] == b'\'') {
                let q = b[i];
                let start = i + 1;
                let end = attrs[start..].bytes().position(|c| c == q).map_or(b.len(), |p| start + p);
                value = &attrs[start..end];
                i = (end + 1).min(b.len());
            } else {
                let start = i;
                while i < b.len() && !b[i].is_ascii_whitespace() {
                    i += 1;
                }
                value = &attrs[start..i];
            }
        }
        if name.eq_ignore_ascii_case(wanted) {
            return Some(value);
        }
        if name.is_empty() {
            i += 1;
        }
    }
    None
}

/// Lowercase hostname of an absolute (`scheme://`), protocol-relative or
/// `www.`-prefixed URL.
pub fn url_host(href: &str) -> Option<String> {
    let h = href.trim();
    let rest = if let Some(pos) = h.find("://") {
        let scheme = &h[..pos];
        if scheme.is_empty() || !scheme.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return None;
        }
        &h[pos + 3..]
    } else if let Some(r) = h.strip_prefix("//") {
        r
    } else if h.get(..4).is_some_and(|p| p.eq_ignore_ascii_case("www.")) {
        h
    } else {
        return None;
    };
    let authority = &rest[..rest.find(['/', '?', '#']).unwrap_or(rest.len())];
    let host_port = authority.rsplit('@').next().unwrap_or(authority);
    let host = if host_port.starts_with('[') {
        &host_port[..host_port.find(']').map_or(host_port.len(), |e| e + 1)]
    } else {
        &host_port[..host_port.find(':').unwrap_or(host_port.len())]
    };
    let host = host.trim_end_matches('.').to_ascii_lowercase();
    if host.is_empty() || host.chars().any(char::is_whitespace) {
        None
    } else {
        Some(host)
    }
}

fn push_text(buf: &mut String, text: &str, html_mode: bool) {
    if text.is_empty() {
        return;
    }
    let decoded = decode_entities(text);
    if html_mode {
        for c in decoded.chars() {
            buf.push(if c == '\n' { ' ' } else { c });
        }
    } else {
        buf.push_str(&decoded);
    }
}

/// Decode `&amp; &lt; &gt; &quot; &apos; &nbsp;` and numeric references;
/// anything else is kept verbatim.
pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        match entity_at(rest) {
            Some((c, len)) => {
                out.push(c);
                rest = &rest[len..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

/// Decoded char and byte length of an entity at the start of `s`.
fn entity_at(s: &str) -> Option<(char, usize)> {
    let semi = s.bytes().take(12).position(|b| b == b';')?;
    let body = &s[1..semi];
    let c = match body {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        _ => {
            let num = body.strip_prefix('#')?;
            let code = match num.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => num.parse::<u32>().ok()?,
            };
            char::from_u32(code).filter(|c| *c != '\0')?
        }
    };
    Some((c, semi + 1))
}

/// Collapse whitespace within lines, drop blank-line runs, and join
/// paragraphs with one empty line.
fn normalize_layout(buf: &str) -> String {
    let mut paragraphs: Vec<Vec<String>> = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for line in buf.split('\n') {
        let collapsed = line.split_whitespace().collect::<Vec<_>>().join(" ");
        if collapsed.is_empty() {
            if !current.is_empty() {
                paragraphs.push(core::mem::take(&mut current));
            }
        } else {
            current.push(collapsed);
        }
    }
    if !current.is_empty() {
        paragraphs.push(current);
    }
    paragraphs.iter().map(|p| p.join("\n")).collect::<Vec<_>>().join("\n\n")
}

/// Break up decoded sequences that would read as markup or entities on a
/// second pass, so stripping is idempotent.
fn protect(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, c) in text.char_indices() {
        out.push(c);
        let next = &text[i + c.len_utf8()..];
        if (c == '<' && starts_markup(next.as_bytes())) || (c == '&' && entity_at(&text[i..]).is_some()) {
            out.push(' ');
        }
    }
    out
}

fn structure_of(text: &str, bullet_count: usize, url_hosts: Vec<String>) -> DocStructure {
    let paragraph_lengths =
        text.split("\n\n").filter(|p| !p.trim().is_empty()).map(word_count).collect();
    let line_lengths = text.lines().filter(|l| !l.is_empty()).map(|l| l.chars().count()).collect();
    DocStructure { bullet_count, paragraph_lengths, line_lengths, url_hosts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn list_items_are_lines_and_bullets() {
        let (text, s) = strip_html("<ul><li>a</li><li>b</li></ul>");
        assert_eq!(text, "a\nb");
        assert_eq!(s.bullet_count, 2);
        assert_eq!(s.paragraph_lengths, vec![2]);
        assert_eq!(s.line_lengths, vec![1, 1]);
    }

    #[test]
    fn href_reduced_to_host() {
        let (text, s) = strip_html("<a href='http://x.com/p?q=1'>link</a>");
        assert_eq!(text, "link");
        assert_eq!(s.url_hosts, vec!["x.com"]);
        let (_, s) = strip_html(r#"<a class="c" HREF="HTTPS://User@Sub.Example.ORG:8080/x">y</a><a href="/rel">z</a>"#);
        assert_eq!(s.url_hosts, vec!["sub.example.org"]);
    }

    #[test]
    fn plain_text_identity() {
        let (text, s) = strip_html("plain text");
        assert_eq!(text, "plain text");
        assert_eq!(s.bullet_count, 0);
        assert_eq!(s.paragraph_lengths, vec![2]);
    }

    #[test]
    fn paragraphs_and_breaks() {
        let (text, s) = strip_html("<p>One two.</p>\n<p>Three<br>four five</p>");
        assert_eq!(text, "One two.\n\nThree\nfour five");
        assert_eq!(s.paragraph_lengths, vec![2, 3]);
        assert_eq!(s.line_lengths, vec![8, 5, 9]);
    }

    #[test]
    fn plain_text_keeps_own_newlines() {
        let (text, s) = strip_html("Step one\nStep two\n\n\nThanks  a lot");
        assert_eq!(text, "Step one\nStep two\n\nThanks a lot");
        assert_eq!(s.paragraph_lengths, vec![4, 3]);
    }

    #[test]
    fn entities() {
        assert_eq!(strip_html("Tom &amp; Jerry&nbsp;&#33;&#x21; &bogus; &copy;").0, "Tom & Jerry !! &bogus; &copy;");
        assert_eq!(strip_html("a &lt;b&gt; c").0, "a < b> c");
        assert_eq!(strip_html("&amp;amp;").0, "& amp;");
    }

    #[test]
    fn sloppy_markup() {
        assert_eq!(strip_html("<div>open <b>bold <i>x</div> tail").0, "open bold x\ntail");
        assert_eq!(strip_html("text <a href=\"x.com").0, "text");
        assert_eq!(strip_html("1 < 2 and 3 > 2").0, "1 < 2 and 3 > 2");
        assert_eq!(strip_html("<!-- hidden -->shown<script>var a = '<p>';</script>!").0, "shown!");
        assert_eq!(strip_html("<!DOCTYPE html><p>x</p>").0, "x");
    }

    #[test]
    fn empty_input() {
        let (text, s) = strip_html("");
        assert_eq!(text, "");
        assert_eq!(s, DocStructure::default());
    }

    #[test]
    fn idempotent_examples() {
        for raw in ["<p>a &amp;lt;b</p>", "x &lt;/p&gt; y", "<li>&amp;#65;</li>", "a\n\n\nb <br> c"] {
            let (once, _) = strip_html(raw);
            let (twice, _) = strip_html(&once);
            assert_eq!(once, twice, "{raw:?}");
        }
    }

    #[test]
    fn host_edge_cases() {
        assert_eq!(url_host("www.Foo.com/bar").as_deref(), Some("www.foo.com"));
        assert_eq!(url_host("//cdn.net/x").as_deref(), Some("cdn.net"));
        assert_eq!(url_host("mailto:a@b.c"), None);
        assert_eq!(url_host("http:///path"), None);
        assert_eq!(url_host("ftp://files.example.com.").as_deref(), Some("files.example.com"));
    }
}
