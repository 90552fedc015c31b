//! Exact solvers for the pair of independent walks killed on the diagonal.
//!
//! For `x != y` the expected meeting time solves
//!
//! ```text
//! sum_z q(x,z) [m(z,y) - m(x,y)] + sum_z q(y,z) [m(x,z) - m(x,y)] = -1,   m(x,x) = 0.
//! ```
//!
//! Small systems are solved by dense LU. Larger meeting-time systems use
//! conjugate gradients in `L^2(pi x pi)`, where the killed pair generator
//! is self-adjoint by reversibility.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dynamics::{Configuration, PayoffMatrix};
use crate::{Error, Result, VotingKernel};

/// Above this many unknowns the meeting-time system switches to CG.
const DENSE_LIMIT: usize = 2_500;
/// Largest ordered-pair state space accepted by [`pair_green`].
const GREEN_LIMIT: usize = 4_200;
const CG_TOL: f64 = 1e-12;

/// Expected meeting times `E[M_{x,y}]` of two independent rate-1 walks.
#[derive(Debug, Clone, Serialize)]
pub struct MeetingTable {
    n: usize,
    m: Vec<f64>,
    /// Max-norm residual of the defining linear system.
    pub residual: f64,
}

impl MeetingTable {
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.m[x * self.n + y]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Row-major `N x N` table.
    pub fn as_slice(&self) -> &[f64] {
        &self.m
    }

    pub fn to_csv(&self) -> String {
        matrix_csv(&self.m, self.n, self.n)
    }
}

fn matrix_csv(values: &[f64], rows: usize, cols: usize) -> String {
    let mut out = String::new();
    for r in 0..rows {
        let line: Vec<String> = values[r * cols..(r + 1) * cols]
            .iter()
            .map(|v| v.to_string())
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// `(A m)(x,y) = 2 m(x,y) - (q m)(x,y) - (m q^T)(x,y)` off the diagonal,
/// zero on it.
fn apply_pair_operator(kernel: &VotingKernel, m: &[f64], out: &mut [f64]) {
    let n = kernel.len();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                out[x * n + y] = 0.0;
                continue;
            }
            let mut v = 2.0 * m[x * n + y];
            for (z, p) in kernel.row(x).iter() {
                v -= p * m[z * n + y];
            }
            for (z, p) in kernel.row(y).iter() {
                v -= p * m[x * n + z];
            }
            out[x * n + y] = v;
        }
    }
}

/// Max-norm residual of the meeting-time system for a candidate table.
pub fn meeting_system_residual(kernel: &VotingKernel, table: &MeetingTable) -> f64 {
    let n = kernel.len();
    let mut am = vec![0.0; n * n];
    apply_pair_operator(kernel, &table.m, &mut am);
    let mut worst: f64 = 0.0;
    for x in 0..n {
        worst = worst.max(table.m[x * n + x].abs());
        for y in 0..n {
            if x != y {
                worst = worst.max((am[x * n + y] - 1.0).abs());
            }
        }
    }
    worst
}

pub fn meeting_times_exact(kernel: &VotingKernel) -> Result<MeetingTable> {
    let n = kernel.len();
    let unknowns = n * (n - 1) / 2;
    let m = if unknowns <= DENSE_LIMIT {
        meeting_dense(kernel)?
    } else {
        meeting_cg(kernel)?
    };
    let mut table = MeetingTable {
        n,
        m,
        residual: 0.0,
    };
    table.residual = meeting_system_residual(kernel, &table);
    Ok(table)
}

fn unordered_index(n: usize, x: usize, y: usize) -> usize {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

fn meeting_dense(kernel: &VotingKernel) -> Result<Vec<f64>> {
    let n = kernel.len();
    let size = n * (n - 1) / 2;
    let mut a = DMatrix::<f64>::zeros(size, size);
    for x in 0..n {
        for y in (x + 1)..n {
            let row = unordered_index(n, x, y);
            a[(row, row)] += 2.0;
            for (z, p) in kernel.row(x).iter() {
                if z != y {
                    a[(row, unordered_index(n, z, y))] -= p;
                }
            }
            for (z, p) in kernel.row(y).iter() {
                if z != x {
                    a[(row, unordered_index(n, x, z))] -= p;
                }
            }
        }
    }
    let rhs = DVector::from_element(size, 1.0);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("meeting-time system".into()))?;
    let mut m = vec![0.0; n * n];
    for x in 0..n {
        for y in (x + 1)..n {
            let v = sol[unordered_index(n, x, y)];
            m[x * n + y] = v;
            m[y * n + x] = v;
        }
    }
    Ok(m)
}

fn meeting_cg(kernel: &VotingKernel) -> Result<Vec<f64>> {
    let n = kernel.len();
    let pi = kernel.pi();
    let weight: Vec<f64> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            if x == y {
                0.0
            } else {
                pi[x] * pi[y]
            }
        })
        .collect();
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .zip(&weight)
            .map(|((u, v), w)| u * v * w)
            .sum()
    };
    let max_abs = |a: &[f64]| a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let mut m = vec![0.0; n * n];
    let mut r: Vec<f64> = weight
        .iter()
        .map(|&w| if w > 0.0 { 1.0 } else { 0.0 })
        .collect();
    let mut p = r.clone();
    let mut ap = vec![0.0; n * n];
    let mut rr = dot(&r, &r);
    let max_iter = 50 * n * n;
    for _ in 0..max_iter {
        if max_abs(&r) < CG_TOL {
            return Ok(m);
        }
        apply_pair_operator(kernel, &p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n * n {
            m[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n * n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::Singular(format!(
        "conjugate gradients did not reach {CG_TOL:e} within {max_iter} iterations"
    )))
}

/// `gamma = sum_{x,y} pi(x) pi(y) E[M_{x,y}]`.
pub fn gamma(kernel: &VotingKernel, table: &MeetingTable) -> f64 {
    let pi = kernel.pi();
    let n = kernel.len();
    let mut s = 0.0;
    for x in 0..n {
        for y in 0..n {
            s += pi[x] * pi[y] * table.get(x, y);
        }
    }
    s
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityCheck {
    /// `sum_{x,y} pi(x)^2 q(x,y) E[M_{x,y}]`
    pub lhs: f64,
    /// `(1 - sum_x pi(x)^2) / 2`
    pub rhs: f64,
    pub residual: f64,
}

pub fn identity_check(kernel: &VotingKernel, table: &MeetingTable) -> IdentityCheck {
    let pi = kernel.pi();
    let mut lhs = 0.0;
    for x in kernel.sites() {
        for (y, p) in kernel.row(x).iter() {
            lhs += pi[x] * pi[x] * p * table.get(x, y);
        }
    }
    let rhs = (1.0 - kernel.nu_total()) / 2.0;
    IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    }
}

/// Occupation times of the independent pair chain before meeting:
/// `g((x,y),(u,v))` over ordered pairs with `x != y`, `u != v`.
#[derive(Debug, Clone)]
pub struct PairGreen {
    n: usize,
    g: DMatrix<f64>,
}

impl PairGreen {
    fn index(&self, x: usize, y: usize) -> usize {
        ordered_index(self.n, x, y)
    }

    pub fn get(&self, x: usize, y: usize, u: usize, v: usize) -> f64 {
        assert!(
            x != y && u != v,
            "Green function is indexed by off-diagonal pairs"
        );
        self.g[(self.index(x, y), self.index(u, v))]
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    /// Ordered off-diagonal pairs in matrix order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
    }

    /// `sum_{(u,v)} g((x,y),(u,v))`, which equals `E[M_{x,y}]`.
    pub fn row_sum(&self, x: usize, y: usize) -> f64 {
        self.g.row(self.index(x, y)).sum()
    }

    pub fn min_entry(&self) -> f64 {
        self.g.min()
    }

    /// `sum_{(u,v)} g((x,y),(u,v)) s(u,v)` for every start pair, returned
    /// as a dense `N x N` table with zero diagonal.
    pub fn integrate(&self, source: impl Fn(usize, usize) -> f64) -> Vec<f64> {
        let n = self.n;
        let s = DVector::from_iterator(n * (n - 1), self.pairs().map(|(u, v)| source(u, v)));
        let h = &self.g * s;
        let mut out = vec![0.0; n * n];
        for (i, (x, y)) in self.pairs().enumerate() {
            out[x * n + y] = h[i];
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let size = self.n * (self.n - 1);
        matrix_csv(self.g.transpose().as_slice(), size, size)
    }
}

fn ordered_index(n: usize, x: usize, y: usize) -> usize {
    x * (n - 1) + if y < x { y } else { y - 1 }
}

pub fn pair_green(kernel: &VotingKernel) -> Result<PairGreen> {
    let n = kernel.len();
    let size = n * (n - 1);
    if size > GREEN_LIMIT {
        return Err(Error::InvalidInput(format!(
            "pair Green function on {n} sites needs a dense {size}x{size} inverse (limit {GREEN_LIMIT})"
        )));
    }
    let mut a = DMatrix::<f64>::zeros(size, size);
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let row = ordered_index(n, x, y);
            a[(row, row)] = 2.0;
            for (z, p) in kernel.row(x).iter() {
                if z != y {
                    a[(row, ordered_index(n, z, y))] -= p;
                }
            }
            for (z, p) in kernel.row(y).iter() {
                if z != x {
                    a[(row, ordered_index(n, x, z))] -= p;
                }
            }
        }
    }
    let g = a
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("pair generator".into()))?;
    Ok(PairGreen { n, g })
}

/// Laws of the initial configuration accepted by
/// [`first_order_coefficient`].
#[derive(Debug, Clone)]
pub enum InitialLaw {
    Point(Configuration),
    /// `u_m`: uniform over configurations with exactly `m` ones.
    UniformOnes(usize),
    /// Independent sites with `P(xi(x) = 1) = density[x]`.
    Product(Vec<f64>),
}

impl InitialLaw {
    /// `E[xi(u) xi_hat(v)]` for `u != v`.
    fn two_point(&self, n: usize) -> Result<Box<dyn Fn(usize, usize) -> f64 + '_>> {
        match self {
            InitialLaw::Point(c) => {
                if c.len() != n {
                    return Err(Error::InvalidInput(
                        "initial configuration has the wrong size".into(),
                    ));
                }
                Ok(Box::new(move |u, v| {
                    (c.get(u) as f64) * (1.0 - c.get(v) as f64)
                }))
            }
            InitialLaw::UniformOnes(m) => {
                if *m > n {
                    return Err(Error::InvalidInput(format!(
                        "u_m needs m <= N, got m = {m}"
                    )));
                }
                let value = (*m * (n - *m)) as f64 / (n * (n - 1)) as f64;
                Ok(Box::new(move |_, _| value))
            }
            InitialLaw::Product(rho) => {
                if rho.len() != n || rho.iter().any(|r| !(0.0..=1.0).contains(r)) {
                    return Err(Error::InvalidInput(
                        "product densities must lie in [0,1], one per site".into(),
                    ));
                }
                Ok(Box::new(move |u, v| rho[u] * (1.0 - rho[v])))
            }
        }
    }
}

/// `E^0_lambda[ int_0^inf D_bar(xi_s) ds ]` for an additive payoff, computed
/// by moment duality:
///
/// `E^0[ int xi_s(x) xi_hat_s(y) ds ] = sum_{u != v} g((x,y),(u,v)) E[xi(u) xi_hat(v)]`,
///
/// assembled with the weights `pi(x) q^l(x,y)` of `D_bar = b (W_3 - W_1) - c W_2`.
pub fn first_order_coefficient(
    kernel: &VotingKernel,
    green: &PairGreen,
    payoff: &PayoffMatrix,
    initial: &InitialLaw,
) -> Result<f64> {
    let n = kernel.len();
    if green.sites() != n {
        return Err(Error::InvalidInput(
            "Green function belongs to a different kernel".into(),
        ));
    }
    let (b, c) = payoff.additive_form().ok_or_else(|| {
        Error::InvalidInput(
            "first-order coefficient needs a payoff without interaction term (Pi11 - Pi10 - Pi01 + Pi00 = 0)".into(),
        )
    })?;
    if b == 0.0 && c == 0.0 {
        return Ok(0.0);
    }
    let source = initial.two_point(n)?;
    let occupation = green.integrate(source);
    let q1 = kernel.matrix_power(1);
    let q2 = kernel.matrix_power(2);
    let q3 = kernel.matrix_power(3);
    let pi = kernel.pi();
    let mut total = 0.0;
    for (x, &pi_x) in pi.iter().enumerate() {
        for y in 0..n {
            if x == y {
                continue;
            }
            let i = x * n + y;
            let weight = pi_x * (b * (q3[i] - q1[i]) - c * q2[i]);
            total += weight * occupation[i];
        }
    }
    Ok(total)
}

/// `m(N-m) / (2N(N-1)) [b(N - 2k) - ck(N - 2)]` on a `k`-regular graph
/// started from `u_m`.
///
/// This value is `k` times [`first_order_coefficient`] for the
/// neighbour-averaged payoffs used throughout this crate; it corresponds to
/// payoffs summed over the `k` neighbours.
pub fn first_order_closed_form(n: usize, k: usize, m: usize, b: f64, c: f64) -> f64 {
    let (nf, kf, mf) = (n as f64, k as f64, m as f64);
    mf * (nf - mf) / (2.0 * nf * (nf - 1.0)) * (b * (nf - 2.0 * kf) - c * kf * (nf - 2.0))
}
