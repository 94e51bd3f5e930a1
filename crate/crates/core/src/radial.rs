//! Discretized radial Hilbert space per angular channel and the radial
//! resolvent amplitudes `⟨R_nl| r (H_l' − E)⁻¹ r |R_nl⟩`.
//!
//! The production path is a single banded solve per query (Dalgarno–Lewis).
//! An explicit sum over the discretized spectrum of the same basis is kept as
//! the oracle. Above the ionization threshold the radial coordinate is
//! uniformly rotated, `r → r·e^{iθ}`, so the outgoing-wave resolvent becomes
//! an ordinary complex-symmetric linear solve.

use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bspline::KnotVector;
use crate::error::{Error, Result};
use crate::hydrogenic::{self, AtomicState, MAX_N};
use crate::linalg::{self, BandedLu, ComplexSpectrum, RealSpectrum};
use crate::quadrature;

/// Highest orbital channel assembled (l' = l + 1 for n ≤ 10).
pub const MAX_CHANNEL_L: u32 = MAX_N;

/// Distance below which a query energy counts as sitting on a pole.
pub const RESONANCE_TOLERANCE: f64 = 1e-8;

const MAX_OVERLAP_CONDITION: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Bspline,
    Sturmian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnotLayout {
    Linear,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBasisConfig {
    pub kind: BasisKind,
    /// Number of radial functions per channel.
    pub count: usize,
    /// Box radius in Bohr (B-splines only).
    pub box_radius: f64,
    pub spline_order: usize,
    pub knot_layout: KnotLayout,
    /// Stretch γ of the exponential layout, `p_j = R (e^{γj/M} − 1)/(e^γ − 1)`.
    pub knot_stretch: f64,
    /// Complex-scaling angle θ in radians; zero disables scaling.
    pub scaling_angle: f64,
    /// Sturmian exponent λ in units of Z, functions `∝ r^{l+1} e^{−λZr}`.
    pub sturmian_exponent: f64,
}

impl Default for RadialBasisConfig {
    fn default() -> Self {
        Self {
            kind: BasisKind::Bspline,
            count: 80,
            box_radius: 30.0,
            spline_order: 7,
            knot_layout: KnotLayout::Exponential,
            knot_stretch: 6.0,
            scaling_angle: 0.0,
            sturmian_exponent: 0.5,
        }
    }
}

impl RadialBasisConfig {
    /// Default grid for a reference state: exponential knots, N = 80, k = 7,
    /// R_max = 30·n²/Z.
    pub fn for_state(state: &AtomicState) -> Self {
        let n = state.n() as f64;
        Self {
            box_radius: 30.0 * n * n / state.z() as f64,
            ..Self::default()
        }
    }

    pub fn bspline(count: usize, box_radius: f64, spline_order: usize) -> Self {
        Self {
            count,
            box_radius,
            spline_order,
            ..Self::default()
        }
    }

    pub fn sturmian(count: usize, exponent: f64) -> Self {
        Self {
            kind: BasisKind::Sturmian,
            count,
            sturmian_exponent: exponent,
            ..Self::default()
        }
    }

    pub fn with_scaling(mut self, theta: f64) -> Self {
        self.scaling_angle = theta;
        self
    }

    pub fn with_layout(mut self, layout: KnotLayout) -> Self {
        self.knot_layout = layout;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.count < 10 {
            return bad(format!("basis count {} < 10", self.count));
        }
        if !(self.scaling_angle >= 0.0 && self.scaling_angle < FRAC_PI_4) {
            return bad(format!("scaling angle {} outside [0, π/4)", self.scaling_angle));
        }
        match self.kind {
            BasisKind::Bspline => {
                if !(self.box_radius > 0.0 && self.box_radius.is_finite()) {
                    return bad(format!("box radius {} must be positive", self.box_radius));
                }
                if self.spline_order < 4 {
                    return bad(format!("spline order {} < 4", self.spline_order));
                }
                if self.count + 3 <= self.spline_order {
                    return bad("too few functions for the spline order".into());
                }
                if self.knot_layout == KnotLayout::Exponential && !(self.knot_stretch > 0.0) {
                    return bad(format!("knot stretch {} must be positive", self.knot_stretch));
                }
            }
            BasisKind::Sturmian => {
                if !(self.sturmian_exponent > 0.0 && self.sturmian_exponent.is_finite()) {
                    return bad(format!("Sturmian exponent {} must be positive", self.sturmian_exponent));
                }
            }
        }
        Ok(())
    }
}

/// Quadrature nodes with the basis functions that are nonzero there.
#[derive(Debug, Clone)]
struct Nodes {
    r: Vec<f64>,
    w: Vec<f64>,
    first: Vec<usize>,
    width: usize,
    vals: Vec<f64>,
    ders: Vec<f64>,
}

impl Nodes {
    fn len(&self) -> usize {
        self.r.len()
    }

    fn at(&self, q: usize) -> (usize, &[f64], &[f64]) {
        let s = q * self.width;
        (
            self.first[q],
            &self.vals[s..s + self.width],
            &self.ders[s..s + self.width],
        )
    }

    /// `Σ_q w_q g(r_q) B_i B_j` and `½ Σ_q w_q B_i' B_j'`.
    fn assemble(&self, n: usize, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for q in 0..self.len() {
            let (first, v, _) = self.at(q);
            let f = self.w[q] * g(self.r[q]);
            for a in 0..self.width {
                let fa = f * v[a];
                for b in 0..self.width {
                    m[(first + a, first + b)] += fa * v[b];
                }
            }
        }
        m
    }

    fn assemble_kinetic(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for q in 0..self.len() {
            let (first, _, d) = self.at(q);
            let f = 0.5 * self.w[q];
            for a in 0..self.width {
                for b in 0..self.width {
                    m[(first + a, first + b)] += f * d[a] * d[b];
                }
            }
        }
        m
    }

    /// `∫ B_i(r) f(r) dr` by the stored rule.
    fn project(&self, n: usize, f: impl Fn(f64) -> Complex64) -> DVector<Complex64> {
        let mut out = DVector::zeros(n);
        for q in 0..self.len() {
            let (first, v, _) = self.at(q);
            let fq = f(self.r[q]) * self.w[q];
            for a in 0..self.width {
                out[first + a] += fq * v[a];
            }
        }
        out
    }
}

fn bspline_nodes(config: &RadialBasisConfig) -> Nodes {
    let k = config.spline_order;
    let intervals = config.count + 3 - k;
    let r_max = config.box_radius;
    let breakpoints: Vec<f64> = (0..=intervals)
        .map(|j| {
            let s = j as f64 / intervals as f64;
            match config.knot_layout {
                KnotLayout::Linear => r_max * s,
                KnotLayout::Exponential => {
                    let g = config.knot_stretch;
                    r_max * (g * s).exp_m1() / g.exp_m1()
                }
            }
        })
        .collect();
    let knots = KnotVector::new(breakpoints, k);
    let points = k + 10;
    let (gx, gw) = quadrature::gauss_legendre(points);
    let total = intervals * points;
    let mut nodes = Nodes {
        r: Vec::with_capacity(total),
        w: Vec::with_capacity(total),
        first: Vec::with_capacity(total),
        width: k,
        vals: Vec::with_capacity(total * k),
        ders: Vec::with_capacity(total * k),
    };
    let mut v = vec![0.0; k];
    let mut d = vec![0.0; k];
    let last = knots.len() - 1;
    for span in 0..intervals {
        let (a, b) = (knots.breakpoints()[span], knots.breakpoints()[span + 1]);
        let half = 0.5 * (b - a);
        for (x, w) in gx.iter().zip(&gw) {
            let r = a + half * (x + 1.0);
            let first = knots.eval(span, r, &mut v, &mut d);
            // drop the spline that is nonzero at r = 0 and the one nonzero at R
            for (j, (vj, dj)) in v.iter_mut().zip(d.iter_mut()).enumerate() {
                let idx = first + j;
                if idx == 0 || idx == last {
                    *vj = 0.0;
                    *dj = 0.0;
                }
            }
            // shift to basis numbering; the first spline is dropped
            let (first, shift) = if first == 0 { (0, 1) } else { (first - 1, 0) };
            nodes.r.push(r);
            nodes.w.push(w * half);
            nodes.first.push(first);
            let take = |src: &[f64], dst: &mut Vec<f64>| {
                for j in 0..k {
                    let idx = j + shift;
                    let val = if idx < k { src[idx] } else { 0.0 };
                    dst.push(val);
                }
            };
            take(&v, &mut nodes.vals);
            take(&d, &mut nodes.ders);
        }
    }
    // clamp windows that run past the last retained function
    let n = config.count;
    for q in 0..nodes.len() {
        if nodes.first[q] + k > n {
            let over = nodes.first[q] + k - n;
            let s = q * k;
            let old_v: Vec<f64> = nodes.vals[s..s + k].to_vec();
            let old_d: Vec<f64> = nodes.ders[s..s + k].to_vec();
            for j in 0..k {
                let src = j as isize - over as isize;
                if src >= 0 {
                    nodes.vals[s + j] = old_v[src as usize];
                    nodes.ders[s + j] = old_d[src as usize];
                } else {
                    nodes.vals[s + j] = 0.0;
                    nodes.ders[s + j] = 0.0;
                }
            }
            debug_assert!(old_v[k - over..].iter().all(|&x| x == 0.0));
            nodes.first[q] = n - k;
        }
    }
    nodes
}

fn sturmian_nodes(config: &RadialBasisConfig, z: u32, l: u32) -> Nodes {
    let n = config.count;
    let lambda = config.sturmian_exponent * z as f64;
    let alpha = 2 * l;
    let points = n + l as usize + 24;
    let (x, ln_w) = quadrature::gauss_laguerre(points, alpha);
    let lag_alpha = (2 * l + 2) as f64;
    // ln N_i with N_i² = 2λ · i! / Γ(i + 2l + 3)
    let ln_norm: Vec<f64> = (0..n)
        .map(|i| {
            let ln_ratio: f64 = (i + 1..=i + 2 * l as usize + 2).map(|v| (v as f64).ln()).sum();
            0.5 * ((2.0 * lambda).ln() - ln_ratio)
        })
        .collect();
    let mut nodes = Nodes {
        r: Vec::with_capacity(points),
        w: Vec::with_capacity(points),
        first: vec![0; points],
        width: n,
        vals: Vec::with_capacity(points * n),
        ders: Vec::with_capacity(points * n),
    };
    let lf = l as f64;
    for (&xq, &lw) in x.iter().zip(&ln_w) {
        let r = xq / (2.0 * lambda);
        nodes.r.push(r);
        nodes.w.push((lw + xq - alpha as f64 * xq.ln()).exp() / (2.0 * lambda));
        // L_i^{α'}(x) and L_{i−1}^{α'+1}(x) (the derivative, up to sign)
        let mut lag = vec![0.0; n];
        let mut lag_d = vec![0.0; n];
        upward_laguerre(xq, lag_alpha, &mut lag);
        upward_laguerre(xq, lag_alpha + 1.0, &mut lag_d);
        let ln_pref = -0.5 * xq + lf * xq.ln();
        for i in 0..n {
            let dl = if i == 0 { 0.0 } else { -lag_d[i - 1] };
            let pref = (ln_norm[i] + ln_pref).exp();
            // B = N x^{l+1} e^{−x/2} L ;  dB/dx = N x^l e^{−x/2} [(l+1)L − xL/2 + xL']
            let val = pref * xq * lag[i];
            let dval = pref * ((lf + 1.0) * lag[i] - 0.5 * xq * lag[i] + xq * dl);
            nodes.vals.push(val);
            nodes.ders.push(2.0 * lambda * dval);
        }
    }
    nodes
}

fn upward_laguerre(x: f64, alpha: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = 1.0 + alpha - x;
    }
    for j in 1..out.len().saturating_sub(1) {
        let jf = j as f64;
        out[j + 1] = ((2.0 * jf + 1.0 + alpha - x) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
    }
}

#[derive(Debug)]
struct Channel {
    nodes_index: usize,
    overlap: DMatrix<f64>,
    hamiltonian: DMatrix<f64>,
    scaled: Option<DMatrix<Complex64>>,
    band: usize,
    spectrum: OnceLock<Result<RealSpectrum>>,
    scaled_spectrum: OnceLock<Result<ComplexSpectrum>>,
}

/// Radial matrices for every channel `l = 0..=MAX_CHANNEL_L` of one nuclear
/// charge. Immutable after construction; spectra are computed on first use.
#[derive(Debug)]
pub struct RadialBasis {
    config: RadialBasisConfig,
    z: u32,
    nodes: Vec<Nodes>,
    channels: Vec<Channel>,
}

/// A radial resolvent request: `⟨R_nl| r (H_l' − E − iε)⁻¹ r |R_nl⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventQuery {
    pub state: AtomicState,
    pub l_prime: u32,
    /// Energy `E` in Hartree at which the resolvent is evaluated.
    pub energy: f64,
    /// Regularization ε ≥ 0 in Hartree.
    pub regularization: f64,
}

impl ResolventQuery {
    pub fn new(state: AtomicState, l_prime: u32, energy: f64) -> Self {
        Self {
            state,
            l_prime,
            energy,
            regularization: 0.0,
        }
    }

    pub fn with_regularization(mut self, eps: f64) -> Self {
        self.regularization = eps;
        self
    }
}

/// Assembles the radial matrices; see [`RadialBasis::build`].
/// Overlap and l-independent operator matrices reused across channels.
type SharedMatrices = (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>);

pub fn build_basis(config: RadialBasisConfig, z: u32) -> Result<RadialBasis> {
    RadialBasis::build(config, z)
}

impl RadialBasis {
    pub fn build(config: RadialBasisConfig, z: u32) -> Result<Self> {
        config.validate()?;
        if !(1..=hydrogenic::MAX_Z).contains(&z) {
            return Err(Error::Domain(format!("Z = {z} outside 1..={}", hydrogenic::MAX_Z)));
        }
        let n = config.count;
        let nodes: Vec<Nodes> = match config.kind {
            BasisKind::Bspline => vec![bspline_nodes(&config)],
            BasisKind::Sturmian => (0..=MAX_CHANNEL_L).map(|l| sturmian_nodes(&config, z, l)).collect(),
        };
        let zf = z as f64;
        let theta = config.scaling_angle;
        let mut channels = Vec::with_capacity(MAX_CHANNEL_L as usize + 1);
        let mut shared: Option<SharedMatrices> = None;
        for l in 0..=MAX_CHANNEL_L {
            let nodes_index = if nodes.len() == 1 { 0 } else { l as usize };
            let fresh = nodes.len() > 1 || shared.is_none();
            if fresh {
                let nd = &nodes[nodes_index];
                let overlap = nd.assemble(n, |_| 1.0);
                check_overlap(&overlap)?;
                let kinetic = nd.assemble_kinetic(n);
                let inv_r2 = nd.assemble(n, |r| 1.0 / (r * r));
                let inv_r = nd.assemble(n, |r| 1.0 / r);
                shared = Some((overlap, kinetic, inv_r2, inv_r));
            }
            let (overlap, kinetic, inv_r2, inv_r) = shared.as_ref().unwrap();
            let centrifugal = 0.5 * (l * (l + 1)) as f64;
            let kin_part = kinetic + inv_r2 * centrifugal;
            let hamiltonian = &kin_part - inv_r * zf;
            let scaled = (theta > 0.0).then(|| {
                let kin_phase = Complex64::from_polar(1.0, -2.0 * theta);
                let pot_phase = Complex64::from_polar(1.0, -theta);
                DMatrix::from_fn(n, n, |i, j| {
                    kin_phase * kin_part[(i, j)] - pot_phase * (zf * inv_r[(i, j)])
                })
            });
            let band = linalg::bandwidth(&hamiltonian).max(linalg::bandwidth(overlap));
            channels.push(Channel {
                nodes_index,
                overlap: overlap.clone(),
                hamiltonian,
                scaled,
                band,
                spectrum: OnceLock::new(),
                scaled_spectrum: OnceLock::new(),
            });
        }
        Ok(Self {
            config,
            z,
            nodes,
            channels,
        })
    }

    pub fn config(&self) -> &RadialBasisConfig {
        &self.config
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn len(&self) -> usize {
        self.config.count
    }

    pub fn is_empty(&self) -> bool {
        self.config.count == 0
    }

    pub fn is_scaled(&self) -> bool {
        self.config.scaling_angle > 0.0
    }

    fn channel(&self, l: u32) -> Result<&Channel> {
        self.channels
            .get(l as usize)
            .ok_or_else(|| Error::InvalidInput(format!("channel l = {l} exceeds {MAX_CHANNEL_L}")))
    }

    pub fn overlap(&self, l: u32) -> Result<&DMatrix<f64>> {
        Ok(&self.channel(l)?.overlap)
    }

    pub fn hamiltonian(&self, l: u32) -> Result<&DMatrix<f64>> {
        Ok(&self.channel(l)?.hamiltonian)
    }

    pub fn scaled_hamiltonian(&self, l: u32) -> Result<Option<&DMatrix<Complex64>>> {
        Ok(self.channel(l)?.scaled.as_ref())
    }

    /// Unscaled generalized spectrum of channel `l` (ascending).
    pub fn spectrum(&self, l: u32) -> Result<&RealSpectrum> {
        let ch = self.channel(l)?;
        ch.spectrum
            .get_or_init(|| linalg::generalized_symmetric_eigen(&ch.hamiltonian, &ch.overlap))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn eigenvalues(&self, l: u32) -> Result<&DVector<f64>> {
        Ok(&self.spectrum(l)?.energies)
    }

    /// Spectrum of the rotated Hamiltonian; requires θ > 0.
    pub fn scaled_spectrum(&self, l: u32) -> Result<&ComplexSpectrum> {
        let ch = self.channel(l)?;
        let h = ch
            .scaled
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("basis is not complex-scaled".into()))?;
        ch.scaled_spectrum
            .get_or_init(|| linalg::generalized_complex_symmetric_eigen(h, &ch.overlap))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `∫ B_i(r) · r · u_nl(r) dr` on the (possibly rotated) contour, where
    /// `u = r R_nl` is the analytic reduced radial function.
    pub fn dipole_source(&self, state: &AtomicState, l_prime: u32, scaled: bool) -> Result<DVector<Complex64>> {
        let ch = self.channel(l_prime)?;
        let nodes = &self.nodes[ch.nodes_index];
        let theta = if scaled { self.config.scaling_angle } else { 0.0 };
        let phase = Complex64::from_polar(1.0, theta);
        let jacobian = Complex64::from_polar(1.0, 0.5 * theta);
        let (n, l, z) = (state.n(), state.l(), state.z());
        Ok(nodes.project(self.len(), |r| {
            let rc = phase * r;
            jacobian * rc * rc * hydrogenic::radial_wavefunction_complex(n, l, z, rc)
        }))
    }

    fn check_query(&self, query: &ResolventQuery) -> Result<()> {
        let state = &query.state;
        if state.z() != self.z {
            return Err(Error::InvalidInput(format!(
                "state has Z = {} but the basis was built for Z = {}",
                state.z(),
                self.z
            )));
        }
        if query.l_prime.abs_diff(state.l()) != 1 {
            return Err(Error::InvalidInput(format!(
                "l' = {} is not l ± 1 for l = {}",
                query.l_prime,
                state.l()
            )));
        }
        if !(query.regularization >= 0.0) || !query.energy.is_finite() {
            return Err(Error::InvalidInput(
                "regularization must be ≥ 0 and energy finite".into(),
            ));
        }
        Ok(())
    }

    /// Rejects energies within [`RESONANCE_TOLERANCE`] of an unscaled eigenvalue.
    fn check_resonance(&self, l_prime: u32, energy: f64) -> Result<()> {
        let eig = self.eigenvalues(l_prime)?;
        if let Some(&nearest) = eig
            .iter()
            .min_by(|a, b| (*a - energy).abs().total_cmp(&(*b - energy).abs()))
        {
            let distance = (nearest - energy).abs();
            if distance < RESONANCE_TOLERANCE {
                return Err(Error::Resonance {
                    energy,
                    eigenvalue: nearest,
                    distance,
                    l: l_prime as usize,
                });
            }
        }
        Ok(())
    }

    /// Whether the query is served on the rotated contour.
    fn use_scaled(&self, query: &ResolventQuery, allow_regularized: bool) -> Result<bool> {
        if query.energy < 0.0 {
            return Ok(false);
        }
        if self.is_scaled() {
            Ok(true)
        } else if allow_regularized && query.regularization > 0.0 {
            Ok(false)
        } else {
            Err(Error::ThresholdRequiresScaling { energy: query.energy })
        }
    }

    /// Radial resolvent amplitude by one banded linear solve.
    ///
    /// Below threshold the unscaled real matrices are used and the result is
    /// real when ε = 0. At or above threshold the rotated matrices are used.
    pub fn channel_amplitude(&self, query: &ResolventQuery) -> Result<Complex64> {
        self.check_query(query)?;
        let scaled = self.use_scaled(query, false)?;
        if !scaled {
            self.check_resonance(query.l_prime, query.energy)?;
        }
        let ch = self.channel(query.l_prime)?;
        let z = Complex64::new(query.energy, query.regularization);
        let n = self.len();
        let system = if scaled {
            let h = ch.scaled.as_ref().expect("scaled basis has rotated matrices");
            DMatrix::from_fn(n, n, |i, j| h[(i, j)] - z * ch.overlap[(i, j)])
        } else {
            DMatrix::from_fn(n, n, |i, j| {
                Complex64::new(ch.hamiltonian[(i, j)], 0.0) - z * ch.overlap[(i, j)]
            })
        };
        let b = self.dipole_source(&query.state, query.l_prime, scaled)?;
        let lu = BandedLu::factor(system, ch.band)?;
        let x = lu.solve(&b)?;
        Ok(b.iter().zip(x.iter()).map(|(bi, xi)| bi * xi).sum())
    }

    /// The same amplitude as an explicit sum over the discretized spectrum,
    /// `Σ_k (bᵀc_k)² / (E_k − E − iε)`.
    pub fn sum_over_states_amplitude(&self, query: &ResolventQuery) -> Result<Complex64> {
        self.check_query(query)?;
        let scaled = self.use_scaled(query, true)?;
        if !scaled {
            self.check_resonance(query.l_prime, query.energy)?;
        }
        let z = Complex64::new(query.energy, query.regularization);
        let b = self.dipole_source(&query.state, query.l_prime, scaled)?;
        if scaled {
            let sp = self.scaled_spectrum(query.l_prime)?;
            Ok((0..sp.energies.len())
                .map(|k| {
                    let d: Complex64 = sp.vectors.column(k).iter().zip(b.iter()).map(|(c, b)| c * b).sum();
                    d * d / (sp.energies[k] - z)
                })
                .sum())
        } else {
            let re = b.map(|c| c.re);
            Ok(self
                .radial_dipoles(&re, query.l_prime)?
                .into_iter()
                .map(|(e, d)| Complex64::new(d * d, 0.0) / (e - z))
                .sum())
        }
    }

    /// Pairs `(E_k, ⟨u_k| r |u_nl⟩)` over the unscaled spectrum of `l'`.
    fn radial_dipoles(&self, source: &DVector<f64>, l_prime: u32) -> Result<Vec<(f64, f64)>> {
        let sp = self.spectrum(l_prime)?;
        Ok((0..sp.energies.len())
            .map(|k| (sp.energies[k], sp.vectors.column(k).dot(source)))
            .collect())
    }

    /// Unscaled eigenenergies of channel `l'` with the radial dipole
    /// elements `⟨u_k| r |u_nl⟩` connecting them to `state`.
    pub fn transition_elements(&self, state: &AtomicState, l_prime: u32) -> Result<Vec<(f64, f64)>> {
        let b = self.dipole_source(state, l_prime, false)?.map(|c| c.re);
        self.radial_dipoles(&b, l_prime)
    }
}

fn check_overlap(s: &DMatrix<f64>) -> Result<()> {
    let eig = SymmetricEigen::new(s.clone()).eigenvalues;
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eig.iter().cloned().fold(0.0, f64::max);
    if !(min > 0.0) || max / min > MAX_OVERLAP_CONDITION {
        return Err(Error::BasisConstruction(format!(
            "overlap condition number {:e} exceeds {MAX_OVERLAP_CONDITION:e}",
            if min > 0.0 { max / min } else { f64::INFINITY }
        )));
    }
    Ok(())
}
