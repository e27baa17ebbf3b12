//! Random relation text drawn from the documented grammar.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const NAMES: [&str; 10] = ["L+", "L-", "L'+", "L'-", "S0+", "T", "tau", "Xt", "Q", "E-"];
const VARS: [&str; 5] = ["n", "m", "l", "k", "j"];

pub struct Gen {
    rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    fn ws(&mut self) -> &'static str {
        [" ", "", "", "  "].choose(&mut self.rng).unwrap()
    }

    pub fn iexpr(&mut self, depth: u32) -> String {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            return if self.rng.gen_bool(0.5) {
                self.rng.gen_range(0..20).to_string()
            } else {
                VARS.choose(&mut self.rng).unwrap().to_string()
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..6) {
            0 => format!("{}+{}", self.iexpr(d), self.iexpr(d)),
            1 => format!("{}{}-{}{}", self.iexpr(d), self.ws(), self.ws(), self.iexpr(d)),
            2 => format!("{}*{}", self.iexpr(d), self.iexpr(d)),
            3 => format!("({})", self.iexpr(d)),
            4 => format!("{}/2", self.iexpr(d)),
            _ => format!("-{}", self.iexpr(d)),
        }
    }

    fn factor(&mut self, depth: u32) -> String {
        let pick = if depth == 0 { self.rng.gen_range(0..4) } else { self.rng.gen_range(0..9) };
        let d = depth.saturating_sub(1);
        match pick {
            0 => self.rng.gen_range(0..9).to_string(),
            1 => format!("q^({})", self.iexpr(2)),
            2 => format!("qb({})", self.iexpr(2)),
            3 => {
                let name = NAMES.choose(&mut self.rng).unwrap();
                let args: Vec<String> = (0..self.rng.gen_range(0..3)).map(|_| self.iexpr(2)).collect();
                format!("{name}{{{}}}", args.join(","))
            }
            4 => format!("[{},{}{}]_({})", self.expr(d), self.ws(), self.expr(d), self.iexpr(2)),
            5 => format!("[{},{}]_({},{})", self.expr(d), self.expr(d), self.iexpr(1), self.iexpr(1)),
            6 => format!("[{},{}]_*", self.expr(d), self.expr(d)),
            7 => format!("({})", self.expr(d)),
            _ => format!("-{}", self.factor(d)),
        }
    }

    fn term(&mut self, depth: u32) -> String {
        let mut s = self.factor(depth);
        for _ in 0..self.rng.gen_range(0..3) {
            s = format!("{s}{}*{}{}", self.ws(), self.ws(), self.factor(depth));
        }
        s
    }

    pub fn expr(&mut self, depth: u32) -> String {
        let mut s = self.term(depth);
        for _ in 0..self.rng.gen_range(0..3) {
            let op = if self.rng.gen_bool(0.5) { "+" } else { "-" };
            s = format!("{s} {op} {}", self.term(depth));
        }
        s
    }

    pub fn relation(&mut self) -> String {
        let mut s = format!("{} == {}", self.expr(2), self.expr(2));
        let nb = self.rng.gen_range(0..3);
        for (i, var) in VARS.iter().take(nb).enumerate() {
            let lo: i64 = self.rng.gen_range(-5..5);
            let hi = lo + self.rng.gen_range(0..5);
            s.push_str(if i == 0 { " for " } else { ", " });
            s.push_str(&format!("{var} in {lo}..{hi}"));
        }
        s
    }
}
