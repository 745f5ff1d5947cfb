//! Exhaustive checks of the structural statements about orbits of even characteristics.

use serde::Serialize;

use super::{classify_set, orbit_members, CharSet, OrbitClass};

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally { name, cases: 0, failures: 0 }
    }
    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }
    fn done(self) -> LemmaCheck {
        LemmaCheck { name: self.name, cases: self.cases, failures: self.failures }
    }
}

fn is(s: CharSet, c: OrbitClass) -> bool {
    classify_set(s) == c
}

fn pairs() -> impl Iterator<Item = CharSet> {
    CharSet::all_of_size(2)
}

/// Runs every check; each entry reports its case count and failures.
pub fn verify_all() -> Vec<LemmaCheck> {
    let c4m = orbit_members(OrbitClass::C4_MINUS);
    let c6p = orbit_members(OrbitClass::C6_PLUS);
    let mut out = Vec::new();

    let mut t = Tally::new("l1");
    for p in pairs() {
        let (mut minus, mut plus) = (0, 0);
        for n in p.complement().iter() {
            match classify_set(p.insert(n)) {
                OrbitClass::C3_MINUS => minus += 1,
                OrbitClass::C3_PLUS => plus += 1,
                _ => {}
            }
        }
        t.check(minus == 4 && plus == 4);
    }
    out.push(t.done());

    let mut t = Tally::new("l0");
    for s in orbit_members(OrbitClass::C3_MINUS) {
        let n = s.complement().iter().filter(|&n| is(s.insert(n), OrbitClass::C4_MINUS)).count();
        t.check(n == 1);
    }
    out.push(t.done());

    let mut t = Tally::new("l0+");
    for s in orbit_members(OrbitClass::C3_PLUS) {
        let found: Vec<usize> =
            s.complement().iter().filter(|&n| is(s.insert(n), OrbitClass::C4_PLUS)).collect();
        t.check(found.len() == 1 && super::EVEN[found[0]] == s.sum());
    }
    out.push(t.done());

    let mut t = Tally::new("c4+");
    for q in CharSet::all_of_size(4) {
        t.check(is(q, OrbitClass::C4_PLUS) == (q.sum() == super::Char2::ZERO));
    }
    out.push(t.done());

    let mut t = Tally::new("c1");
    for p in pairs() {
        t.check(c4m.iter().filter(|q| p.is_subset(**q)).count() == 2);
    }
    out.push(t.done());

    let mut t = Tally::new("l1t");
    for (i, a) in c4m.iter().enumerate() {
        for b in &c4m[i + 1..] {
            if a.intersection(*b).len() == 2 {
                t.check(is(a.sym_diff(*b), OrbitClass::C4_MINUS));
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("l2t");
    for (i, a) in c4m.iter().enumerate() {
        for b in &c4m[i + 1..] {
            let common = a.intersection(*b);
            if common.len() == 1 {
                let h = a.union(*b).complement();
                t.check(h.len() == 3 && is(h.union(common), OrbitClass::C4_MINUS));
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new("c5-c4-");
    for m in CharSet::all_of_size(5) {
        if !is(m, OrbitClass::C5_MINUS) {
            t.check(!c4m.iter().any(|q| q.is_subset(m)));
        }
    }
    out.push(t.done());

    let mut t = Tally::new("c6-c5-");
    for m in CharSet::all_of_size(6) {
        let n = m.subsets_of_size(5).filter(|&q| is(q, OrbitClass::C5_MINUS)).count();
        t.check(is(m, OrbitClass::C6_MINUS) == (n == 6));
    }
    out.push(t.done());

    let mut t = Tally::new("c6-sum0");
    for m in CharSet::all_of_size(6) {
        t.check(is(m, OrbitClass::C6_MINUS) == (m.sum() == super::Char2::ZERO));
    }
    out.push(t.done());

    let c4p = orbit_members(OrbitClass::C4_PLUS);
    let mut t = Tally::new("l00c");
    for m in CharSet::all_of_size(6) {
        let has_plus = c4p.iter().any(|q| q.is_subset(m));
        let has_minus = c4m.iter().any(|q| q.is_subset(m));
        t.check(is(m, OrbitClass::C6_MINUS) == !has_plus);
        t.check(is(m, OrbitClass::C6_PLUS) == !has_minus);
    }
    out.push(t.done());

    let mut t = Tally::new("pA");
    for a in &c4m {
        for b in &c4m {
            let k = a.intersection(*b).len();
            let d = a.sym_diff(*b);
            t.check(match k {
                0 => false,
                1 => is(d, OrbitClass::C6_PLUS),
                2 => is(d, OrbitClass::C4_MINUS),
                _ => a == b,
            });
        }
    }
    out.push(t.done());

    let mut t = Tally::new("pB");
    for a in &c6p {
        for b in &c6p {
            let k = a.intersection(*b).len();
            let d = a.sym_diff(*b);
            t.check(match k {
                0..=2 => false,
                3 => is(d, OrbitClass::C6_PLUS),
                4 => is(d, OrbitClass::C4_MINUS),
                _ => a == b,
            });
        }
    }
    out.push(t.done());

    let mut t = Tally::new("pC");
    for a in &c6p {
        for b in &c4m {
            if a.complement() == *b {
                continue;
            }
            let d = a.sym_diff(*b);
            t.check(match a.intersection(*b).len() {
                3 => is(d, OrbitClass::C4_MINUS),
                2 => is(d, OrbitClass::C6_PLUS),
                _ => false,
            });
        }
    }
    out.push(t.done());

    out
}
