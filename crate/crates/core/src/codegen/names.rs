//! Identifier case conversions for generated names.

/// `FreeCell` → `free_cell`, `SizeKls_16` → `size_kls_16`,
/// `lowWater` → `low_water`, `SHORT_ENCODE` → `short_encode`.
pub fn snake(s: &str) -> String {
    let cs: Vec<char> = s.chars().collect();
    let mut out = String::with_capacity(s.len() + 4);
    for (i, &c) in cs.iter().enumerate() {
        if c.is_ascii_uppercase() && i > 0 {
            let prev = cs[i - 1];
            let next_lower = cs.get(i + 1).is_some_and(|n| n.is_ascii_lowercase());
            if prev.is_ascii_lowercase() || prev.is_ascii_digit() || (prev.is_ascii_uppercase() && next_lower) {
                out.push('_');
            }
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

pub fn screaming(s: &str) -> String {
    snake(s).to_ascii_uppercase()
}

/// `cell_1` → `Cell_1`.
pub fn capitalize(s: &str) -> String {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + cs.as_str(),
        None => String::new(),
    }
}
