use crate::program::{parse_program, PrimitiveSet, ProgramTree};

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// Index one past the `)` matching the `(` at `open`, if any.
fn matching_close(s: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &c) in s.iter().enumerate().skip(open) {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

/// Every maximal balanced `ident(...)` substring of `reply` that parses as a
/// program, in order of appearance. A candidate that fails to parse is
/// skipped whole; its inner calls are not tried on their own.
pub fn extract_programs(reply: &str, pset: &PrimitiveSet) -> Vec<ProgramTree> {
    let s = reply.as_bytes();
    let mut found = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let starts_ident = is_ident(s[i]) && (i == 0 || !is_ident(s[i - 1]));
        if !starts_ident {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < s.len() && is_ident(s[j]) {
            j += 1;
        }
        let mut k = j;
        while k < s.len() && s[k].is_ascii_whitespace() && s[k] != b'\n' {
            k += 1;
        }
        if k < s.len() && s[k] == b'(' {
            if let Some(end) = matching_close(s, k) {
                if let Ok(tree) = parse_program(&reply[i..end], pset) {
                    found.push(tree);
                }
                i = end;
                continue;
            }
        }
        i = j;
    }
    found
}
