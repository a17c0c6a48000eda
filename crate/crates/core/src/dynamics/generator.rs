//! The GKLS generator written as L(ρ) = Kρ + ρK† + Σ c·AρB†.
//!
//! For a channel with jump L, rate γ, occupancy N and anomalous term M:
//!
//! K = −iH − ½γ[(N+1)L†L + N·LL†] + ½γM(L†² + L²)
//!
//! with jump terms γ(N+1)·LρL†, γN·L†ρL, −γM·L†ρL† and −γM·LρL. The last
//! two vanish for thermal channels.

use alloc::vec::Vec;

use super::channel::BathChannel;
use crate::operator::{CMatrix, HermitianOperator};
use crate::{Error, Result, C64};

#[derive(Clone, Debug)]
struct JumpTerm {
    coeff: f64,
    left: CMatrix,
    /// B in A ρ B†.
    right: CMatrix,
}

/// The Hamiltonian-independent part of the generator.
#[derive(Clone, Debug)]
pub struct Dissipator {
    dim: usize,
    /// Non-Hermitian part of K.
    anti: CMatrix,
    jumps: Vec<JumpTerm>,
}

impl Dissipator {
    pub fn new(dim: usize, channels: &[BathChannel]) -> Result<Self> {
        let mut anti = CMatrix::zeros(dim);
        let mut jumps = Vec::new();
        for ch in channels {
            if ch.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: ch.dim() });
            }
            let g = ch.rate();
            if g == 0.0 {
                continue;
            }
            let l = ch.jump().clone();
            let ld = l.adjoint();
            let n = ch.effective_occupancy();
            let m = ch.anomalous();
            anti.add_scaled(&ld.matmul(&l), C64::new(-0.5 * g * (n + 1.0), 0.0));
            jumps.push(JumpTerm { coeff: g * (n + 1.0), left: l.clone(), right: l.clone() });
            if n != 0.0 {
                anti.add_scaled(&l.matmul(&ld), C64::new(-0.5 * g * n, 0.0));
                jumps.push(JumpTerm { coeff: g * n, left: ld.clone(), right: ld.clone() });
            }
            if m != 0.0 {
                anti.add_scaled(&ld.matmul(&ld), C64::new(0.5 * g * m, 0.0));
                anti.add_scaled(&l.matmul(&l), C64::new(0.5 * g * m, 0.0));
                jumps.push(JumpTerm { coeff: -g * m, left: ld.clone(), right: l.clone() });
                jumps.push(JumpTerm { coeff: -g * m, left: l, right: ld });
            }
        }
        Ok(Dissipator { dim, anti, jumps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// The full generator for one Hamiltonian and one set of channels.
#[derive(Clone, Debug)]
pub struct Generator {
    k: CMatrix,
    jumps: Vec<JumpTerm>,
}

/// Work buffers reused across generator applications.
#[derive(Clone, Debug)]
pub struct Workspace {
    a: CMatrix,
    b: CMatrix,
    c: CMatrix,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace { a: CMatrix::zeros(dim), b: CMatrix::zeros(dim), c: CMatrix::zeros(dim) }
    }
}

impl Generator {
    pub fn new(h: &HermitianOperator, channels: &[BathChannel]) -> Result<Self> {
        Self::from_parts(h, &Dissipator::new(h.dim(), channels)?)
    }

    pub fn from_parts(h: &HermitianOperator, d: &Dissipator) -> Result<Self> {
        if h.dim() != d.dim {
            return Err(Error::DimensionMismatch { expected: d.dim, found: h.dim() });
        }
        let mut k = d.anti.clone();
        k.add_scaled(h.matrix(), C64::new(0.0, -1.0));
        Ok(Generator { k, jumps: d.jumps.clone() })
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// `out = L(ρ)` for Hermitian ρ; the result is Hermitian by construction.
    pub fn apply_into(&self, rho: &CMatrix, out: &mut CMatrix, ws: &mut Workspace) {
        let n = self.dim();
        // Kρ + ρK† = Kρ + (Kρ)† when ρ = ρ†.
        self.k.matmul_into(rho, &mut ws.a);
        *out = CMatrix::zeros(n);
        {
            let a = ws.a.as_slice();
            let o = out.as_mut_slice();
            for i in 0..n {
                for j in 0..n {
                    o[i * n + j] = a[i * n + j] + a[j * n + i].conj();
                }
            }
        }
        for term in &self.jumps {
            // A ρ B† = (B (Aρ)†)†
            term.left.matmul_into(rho, &mut ws.a);
            adjoint_into(&ws.a, &mut ws.b);
            term.right.matmul_into(&ws.b, &mut ws.c);
            let c = ws.c.as_slice();
            let o = out.as_mut_slice();
            for i in 0..n {
                for j in 0..n {
                    o[i * n + j] += c[j * n + i].conj() * term.coeff;
                }
            }
        }
        out.hermitize();
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim());
        let mut ws = Workspace::new(self.dim());
        self.apply_into(rho, &mut out, &mut ws);
        out
    }

    /// Nonzero entries of the superoperator acting on row-major vec(ρ):
    /// (row, column, value) with ρ_mn at index m·dim + n. Entries may repeat
    /// and must be summed.
    pub fn superoperator_triplets(&self) -> Vec<(usize, usize, C64)> {
        let n = self.dim();
        let zero = C64::new(0.0, 0.0);
        let idx = |m: usize, k: usize| m * n + k;
        let mut out = Vec::new();
        for m in 0..n {
            for k in 0..n {
                let kmk = self.k[(m, k)];
                if kmk == zero {
                    continue;
                }
                // (Kρ)_{m,c} = K_mk ρ_kc ; (ρK†)_{c,m} = ρ_ck conj(K_mk)
                for c in 0..n {
                    out.push((idx(m, c), idx(k, c), kmk));
                    out.push((idx(c, m), idx(c, k), kmk.conj()));
                }
            }
        }
        for term in &self.jumps {
            let a_nz = nonzeros(&term.left);
            let b_nz = nonzeros(&term.right);
            for &(m, k, a) in &a_nz {
                for &(p, l, b) in &b_nz {
                    out.push((idx(m, p), idx(k, l), a * b.conj() * term.coeff));
                }
            }
        }
        out
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, C64)> {
    let n = m.dim();
    let mut v = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                v.push((i, j, z));
            }
        }
    }
    v
}

fn adjoint_into(src: &CMatrix, dst: &mut CMatrix) {
    let n = src.dim();
    if dst.dim() != n {
        *dst = CMatrix::zeros(n);
    }
    let s = src.as_slice();
    let d = dst.as_mut_slice();
    for i in 0..n {
        for j in 0..n {
            d[j * n + i] = s[i * n + j].conj();
        }
    }
}

/// dρ/dt = −i[H,ρ] + Σ dissipators, for Hermitian ρ.
pub fn lindblad_rhs(
    rho: &CMatrix,
    h: &HermitianOperator,
    channels: &[BathChannel],
) -> Result<CMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: rho.dim() });
    }
    Ok(Generator::new(h, channels)?.apply(rho))
}
