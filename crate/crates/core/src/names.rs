//! Deterministic fresh-name generation.

use std::collections::BTreeSet;

/// Hands out `base'1`, `base'2`, ... skipping every name already taken.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    taken: BTreeSet<String>,
}

impl FreshNames {
    pub fn new<I, S>(taken: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FreshNames { taken: taken.into_iter().map(Into::into).collect() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.taken.insert(name.to_string());
    }

    pub fn is_taken(&self, name: &str) -> bool {
        self.taken.contains(name)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let mut k = 1;
        loop {
            let name = format!("{base}'{k}");
            if self.taken.insert(name.clone()) {
                return name;
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_taken_names() {
        let mut f = FreshNames::new(["A", "A'1"]);
        assert_eq!(f.fresh("A"), "A'2");
        assert_eq!(f.fresh("A"), "A'3");
        assert_eq!(f.fresh("B"), "B'1");
    }
}
