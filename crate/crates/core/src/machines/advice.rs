//! Advice functions: one word per input length.

use std::fmt;
use std::sync::Arc;

use crate::encodings::{BitStream, BitWord};
use crate::nonuniform::bounds::BoundFunction;

type WordFn = dyn Fn(usize) -> BitWord + Send + Sync;

#[derive(Clone)]
pub struct Advice {
    pub size: BoundFunction,
    word: Arc<WordFn>,
    /// Shorter-length advice words are prefixes of longer ones.
    pub prefix: bool,
    pub name: String,
}

impl Advice {
    /// `word(n)` must have length `size(n)`; checked on every access.
    pub fn new(
        name: impl Into<String>,
        size: BoundFunction,
        prefix: bool,
        word: impl Fn(usize) -> BitWord + Send + Sync + 'static,
    ) -> Self {
        Advice {
            size,
            word: Arc::new(word),
            prefix,
            name: name.into(),
        }
    }

    pub fn empty() -> Self {
        Self::new("empty", BoundFunction::constant(0), true, |_| {
            BitWord::new()
        })
    }

    pub fn at(&self, n: usize) -> BitWord {
        let w = (self.word)(n);
        assert_eq!(
            w.len(),
            self.size.eval(n),
            "advice {} has wrong length at n = {n}",
            self.name
        );
        w
    }
}

impl fmt::Debug for Advice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Advice({}, size {})", self.name, self.size)
    }
}

/// Prefix advice `n -> r_0 ... r_{f(n)-1}`.
pub fn advice_from_stream(r: &BitStream, f: &BoundFunction) -> Advice {
    let stream = r.clone();
    let size = f.clone();
    Advice::new(format!("prefix({r},{f})"), f.clone(), true, move |n| {
        stream.prefix(size.eval(n))
    })
}
