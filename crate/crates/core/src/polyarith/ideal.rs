use crate::polyarith::{ModPoly, Precision};

/// Generators of an ideal of `F_p[x_1..x_N]`. Zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    p: u32,
    nvars: usize,
    gens: Vec<ModPoly>,
}

impl IdealGens {
    /// Panics if a generator is not over `F_p` with the given shape.
    pub fn new(p: u32, nvars: usize, gens: impl IntoIterator<Item = ModPoly>) -> Self {
        let gens: Vec<ModPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert_eq!(
                g.precision(),
                Precision::Mod(1),
                "ideal generators live over F_p"
            );
            assert_eq!(g.prime(), p);
            assert_eq!(g.nvars(), nvars);
        }
        Self { p, nvars, gens }
    }

    pub fn zero(p: u32, nvars: usize) -> Self {
        Self {
            p,
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[ModPoly] {
        &self.gens
    }

    pub fn into_generators(self) -> Vec<ModPoly> {
        self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = ModPoly>) {
        let more = IdealGens::new(self.p, self.nvars, other);
        self.gens.extend(more.gens);
    }
}
