//! Role-to-cell map of a compiled network and its sidecar text form.
//!
//! ```text
//! sigmanet-layout 1
//! const step 4
//! cell 0 bias
//! cell 1 input.scale
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};

const MAGIC: &str = "sigmanet-layout 1";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    /// In cell order.
    pub roles: Vec<(String, usize)>,
    pub constants: Vec<(String, u64)>,
}

impl Layout {
    pub fn insert(&mut self, role: String, cell: usize) {
        self.roles.push((role, cell));
    }

    pub fn get(&self, role: &str) -> Option<usize> {
        self.roles.iter().find(|(r, _)| r == role).map(|(_, c)| *c)
    }

    pub fn constant(&self, name: &str) -> Option<u64> {
        self.constants
            .iter()
            .find(|(r, _)| r == name)
            .map(|(_, c)| *c)
    }

    /// Cells whose role starts with `prefix`.
    pub fn cells_with_prefix<'a>(
        &'a self,
        prefix: &'a str,
    ) -> impl Iterator<Item = (&'a str, usize)> + 'a {
        self.roles
            .iter()
            .filter(move |(r, _)| r.starts_with(prefix))
            .map(|(r, c)| (r.as_str(), *c))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC}\n");
        for (name, v) in &self.constants {
            writeln!(s, "const {name} {v}").unwrap();
        }
        for (role, cell) in &self.roles {
            writeln!(s, "cell {cell} {role}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(Error::parse(1, format!("expected `{MAGIC}`"))),
        }
        let mut layout = Layout::default();
        for (i, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::parse(i + 1, format!("bad number {s:?}")))
            };
            match toks.as_slice() {
                ["const", name, v] => layout.constants.push((name.to_string(), num(v)?)),
                ["cell", c, role] => layout.roles.push((role.to_string(), num(c)? as usize)),
                _ => {
                    return Err(Error::parse(
                        i + 1,
                        "expected `const <name> <v>` or `cell <i> <role>`",
                    ))
                }
            }
        }
        Ok(layout)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let mut l = Layout::default();
        l.insert("bias".into(), 0);
        l.insert("stack.a.content".into(), 1);
        l.constants.push(("step".into(), 4));
        let back = Layout::parse(&l.to_text()).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.get("stack.a.content"), Some(1));
        assert_eq!(back.constant("step"), Some(4));
        assert!(Layout::parse("cell 0 x").is_err());
    }
}
