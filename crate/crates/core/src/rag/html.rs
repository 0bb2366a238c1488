//! Best-effort HTML-to-text conversion.
//!
//! Drops `<script>` and `<style>` elements with their contents, strips all
//! other tags keeping inner text, decodes the five standard entities, and
//! collapses whitespace. Malformed markup is handled by forward scanning:
//! an unterminated tag swallows the rest of the input, and stray `>`
//! characters pass through as text.

/// Elements whose contents are dropped along with their tags.
const DROP_CONTENT: [&str; 2] = ["script", "style"];

fn tag_name(tag_body: &str) -> String {
    tag_body
        .trim_start_matches('/')
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Strips tags and returns the readable text.
pub fn strip_html(input: &str) -> String {
    let mut text = String::with_capacity(input.len());
    let mut rest = input;

    while let Some(open) = rest.find('<') {
        text.push_str(&rest[..open]);
        rest = &rest[open + 1..];
        let close = match rest.find('>') {
            Some(pos) => pos,
            None => {
                rest = "";
                break;
            }
        };
        let body = &rest[..close];
        rest = &rest[close + 1..];

        let name = tag_name(body);
        if DROP_CONTENT.contains(&name.as_str()) && !body.starts_with('/') {
            // skip forward past the matching close tag, if any
            let lower = rest.to_ascii_lowercase();
            let needle = format!("</{name}");
            if let Some(end_open) = lower.find(&needle) {
                let after = &rest[end_open..];
                match after.find('>') {
                    Some(end_close) => rest = &after[end_close + 1..],
                    None => {
                        rest = "";
                        break;
                    }
                }
            } else {
                rest = "";
                break;
            }
        }
    }
    text.push_str(rest);

    let decoded = decode_entities(&text);
    let collapsed: Vec<&str> = decoded.split_whitespace().collect();
    collapsed.join(" ")
}

/// Decodes `&lt;`, `&gt;`, `&quot;`, `&apos;`, and (last) `&amp;`.
fn decode_entities(text: &str) -> String {
    text.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}
