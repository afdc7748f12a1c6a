//! Permutation group order from generators (deterministic Schreier–Sims).

/// `p[x]` is the image of `x`.
pub type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a ∘ b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn is_identity(a: &Perm) -> bool {
    a.iter().enumerate().all(|(x, &y)| x == y)
}

struct Level {
    point: usize,
    /// `transversal[p]` maps `point` to `p`.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

struct Chain {
    n: usize,
    base: Vec<usize>,
    strong: Vec<Perm>,
    levels: Vec<Level>,
}

impl Chain {
    fn gens_fixing_prefix(&self, i: usize) -> Vec<&Perm> {
        self.strong
            .iter()
            .filter(|g| self.base[..i].iter().all(|&b| g[b] == b))
            .collect()
    }

    fn rebuild(&mut self) {
        self.levels = (0..self.base.len())
            .map(|i| {
                let point = self.base[i];
                let gens = self.gens_fixing_prefix(i);
                let mut transversal: Vec<Option<Perm>> = vec![None; self.n];
                transversal[point] = Some((0..self.n).collect());
                let mut orbit = vec![point];
                let mut head = 0;
                while head < orbit.len() {
                    let p = orbit[head];
                    head += 1;
                    for g in &gens {
                        let q = g[p];
                        if transversal[q].is_none() {
                            transversal[q] = Some(compose(g, transversal[p].as_ref().unwrap()));
                            orbit.push(q);
                        }
                    }
                }
                Level {
                    point,
                    transversal,
                    orbit,
                }
            })
            .collect();
    }

    /// Sifts `h` through levels `from..`; returns a non-identity residue if
    /// `h` is not in the group described by those levels.
    fn sift(&self, mut h: Perm, from: usize) -> Option<Perm> {
        for level in &self.levels[from..] {
            let beta = h[level.point];
            match &level.transversal[beta] {
                Some(u) => h = compose(&inverse(u), &h),
                None => return Some(h),
            }
        }
        if is_identity(&h) {
            None
        } else {
            Some(h)
        }
    }

    fn add_strong(&mut self, g: Perm) {
        if self.base.iter().all(|&b| g[b] == b) {
            let moved = (0..self.n).find(|&x| g[x] != x).expect("non-identity");
            self.base.push(moved);
        }
        self.strong.push(g);
        self.rebuild();
    }

    /// Finds a Schreier generator that does not sift, if any.
    fn find_defect(&self) -> Option<Perm> {
        for i in (0..self.levels.len()).rev() {
            let gens = self.gens_fixing_prefix(i);
            let level = &self.levels[i];
            for &p in &level.orbit {
                let up = level.transversal[p].as_ref().unwrap();
                for s in &gens {
                    let sp = s[p];
                    let usp = level.transversal[sp].as_ref().unwrap();
                    let h = compose(&inverse(usp), &compose(s, up));
                    if let Some(r) = self.sift(h, i + 1) {
                        return Some(r);
                    }
                }
            }
        }
        None
    }
}

/// Order of the permutation group on `0..n` generated by `gens`.
pub fn group_order(n: usize, gens: &[Perm]) -> u128 {
    let mut chain = Chain {
        n,
        base: Vec::new(),
        strong: Vec::new(),
        levels: Vec::new(),
    };
    for g in gens {
        assert_eq!(g.len(), n, "generator acts on the wrong number of points");
        if let Some(r) = chain.sift(g.clone(), 0) {
            chain.add_strong(r);
        }
    }
    while let Some(r) = chain.find_defect() {
        chain.add_strong(r);
    }
    chain.levels.iter().map(|l| l.orbit.len() as u128).product()
}
