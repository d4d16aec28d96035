use std::collections::BTreeSet;

fn is_name_start_char(c: char) -> bool {
    matches!(c,
        'A'..='Z'
        | '_'
        | 'a'..='z'
        | '\u{C0}'..='\u{D6}'
        | '\u{D8}'..='\u{F6}'
        | '\u{F8}'..='\u{2FF}'
        | '\u{370}'..='\u{37D}'
        | '\u{37F}'..='\u{1FFF}'
        | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}'
        | '\u{2C00}'..='\u{2FEF}'
        | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}'
        | '\u{FDF0}'..='\u{FFFD}'
        | '\u{10000}'..='\u{EFFFF}')
}

fn is_name_char(c: char) -> bool {
    is_name_start_char(c)
        || matches!(c, '-' | '.' | '0'..='9' | '\u{B7}' | '\u{0300}'..='\u{036F}' | '\u{203F}'..='\u{2040}')
}

/// Rewrites `raw` into an XML NCName usable both as an IRI fragment and as
/// the local part of an RDF/XML element name. Disallowed characters become
/// `_XX` (UTF-8 bytes in hex); a leading non-start character gets a `_` prefix.
pub fn local_name(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        if is_name_char(c) {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("_{b:02X}"));
            }
        }
    }
    match out.chars().next() {
        Some(c) if is_name_start_char(c) => out,
        _ => format!("_{out}"),
    }
}

pub fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_name_start_char(c)) && chars.all(is_name_char)
}

/// Hands out unique local names within one ontology.
#[derive(Debug, Default)]
pub struct NameAllocator {
    used: BTreeSet<String>,
}

impl NameAllocator {
    /// Returns `desired` if free, otherwise `desired_2`, `desired_3`, ...
    /// The second element is true when a suffix was needed.
    pub fn allocate(&mut self, desired: &str) -> (String, bool) {
        if self.used.insert(desired.to_string()) {
            return (desired.to_string(), false);
        }
        let mut n = 2;
        loop {
            let candidate = format!("{desired}_{n}");
            if self.used.insert(candidate.clone()) {
                return (candidate, true);
            }
            n += 1;
        }
    }
}
