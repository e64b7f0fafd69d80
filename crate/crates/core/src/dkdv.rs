//! The assembled carrier/state system: instances, sweeps, soliton data,
//! commuting-pair checks and locality probes.

use serde::Serialize;

use crate::affine::{is_reduced, rho_shift, AffineWord, Glide};
use crate::error::{Error, Result};
use crate::lusztig::{Interaction, WeightedWord};
use crate::network::{
    build_diagram, positive_weights_for, trajectory, wire_ansatz, ChamberLabel,
    Crossing, Trajectory,
};
use crate::scalar::{max_rel_diff, serde_scalar, Scalar};
use crate::tau::{tau_eval, vertex_weight, TauFunction};

/// Default relative tolerance for window edges to count as vacuum.
pub const EDGE_TOL: f64 = 1e-8;

/// A state glide `u`, a carrier glide `v`, wire weights and the commuting
/// vacuum/carrier pair they induce.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct SystemInstance<S: Scalar> {
    u: Glide,
    v: Glide,
    #[serde(with = "serde_scalar::vec")]
    alpha: Vec<S>,
    #[serde(with = "serde_scalar::vec")]
    vacuum: Vec<S>,
    #[serde(with = "serde_scalar::vec")]
    carrier: Vec<S>,
    #[serde(skip)]
    interaction: Interaction,
    #[serde(skip)]
    chart: Vec<Crossing>,
    trajectory_u: Trajectory,
    trajectory_v: Trajectory,
}

/// Builds an instance; without `alpha`, weights come from the trajectory
/// chamber of `v·u`.
pub fn make_instance<S: Scalar>(u: &Glide, v: &Glide, alpha: Option<Vec<S>>) -> Result<SystemInstance<S>> {
    if u.n() != v.n() {
        return Err(Error::RankMismatch(u.n(), v.n()));
    }
    let vu = v.word().concat(u.word())?;
    if !is_reduced(&vu) {
        return Err(Error::NotReduced(vu.to_string()));
    }
    let alpha = match alpha {
        Some(a) => a,
        None => positive_weights_for(&vu, v.len())?.into_iter().map(S::from_i64).collect(),
    };
    let (vacuum, carrier) = wire_ansatz(u, v, &alpha)?;
    let interaction = Interaction::new(u, v)?;
    let chart = build_diagram(u.word(), 0)?.crossings().to_vec();
    let v_tilde = v.rotate(-(v.offset() as i64));
    Ok(SystemInstance {
        u: u.clone(),
        v: v.clone(),
        alpha,
        vacuum,
        carrier,
        interaction,
        chart,
        trajectory_u: trajectory(u),
        trajectory_v: trajectory(&v_tilde),
    })
}

impl<S: Scalar> SystemInstance<S> {
    pub fn u(&self) -> &Glide {
        &self.u
    }

    pub fn v(&self) -> &Glide {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.u.n()
    }

    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }

    pub fn vacuum(&self) -> &[S] {
        &self.vacuum
    }

    /// The carrier `z_{-infinity}`.
    pub fn carrier(&self) -> &[S] {
        &self.carrier
    }

    pub fn interaction(&self) -> &Interaction {
        &self.interaction
    }

    /// Crossings of `|u`, the chart for every state.
    pub fn chart(&self) -> &[Crossing] {
        &self.chart
    }

    /// `t(u)`.
    pub fn trajectory_u(&self) -> &Trajectory {
        &self.trajectory_u
    }

    /// `t(rho^{-k2}(v))`.
    pub fn trajectory_v(&self) -> &Trajectory {
        &self.trajectory_v
    }

    /// `i t(u) - m t(rho^{-k2}(v))`.
    pub fn shift(&self, i: i64, m: i64) -> ChamberLabel {
        self.trajectory_u.scaled(i).minus(&self.trajectory_v.scaled(m))
    }
}

/// States `y_i` for `i` in `i_lo..i_lo + len`, vacuum outside.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct StateSequence<S: Scalar> {
    i_lo: i64,
    #[serde(with = "state_rows")]
    states: Vec<Vec<S>>,
}

mod state_rows {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use crate::scalar::Scalar;

    pub fn serialize<S: Scalar, Ser: Serializer>(rows: &[Vec<S>], ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = ser.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let rendered: Vec<String> = row.iter().map(Scalar::render).collect();
            seq.serialize_element(&rendered)?;
        }
        seq.end()
    }
}

impl<S: Scalar> StateSequence<S> {
    pub fn new(i_lo: i64, states: Vec<Vec<S>>) -> Result<Self> {
        if let Some(first) = states.first() {
            if let Some(bad) = states.iter().find(|s| s.len() != first.len()) {
                return Err(Error::LengthMismatch { expected: first.len(), found: bad.len() });
            }
        }
        for s in &states {
            crate::lusztig::check_positive(s)?;
        }
        Ok(StateSequence { i_lo, states })
    }

    pub fn vacuum(inst: &SystemInstance<S>, i_lo: i64, len: usize) -> Self {
        StateSequence { i_lo, states: vec![inst.vacuum.clone(); len] }
    }

    pub fn i_lo(&self) -> i64 {
        self.i_lo
    }

    /// One past the last index.
    pub fn i_hi(&self) -> i64 {
        self.i_lo + self.states.len() as i64
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<S>] {
        &self.states
    }

    pub fn get(&self, i: i64) -> Option<&[S]> {
        usize::try_from(i - self.i_lo).ok().and_then(|k| self.states.get(k)).map(Vec::as_slice)
    }

    pub fn set(&mut self, i: i64, y: Vec<S>) -> Result<()> {
        crate::lusztig::check_positive(&y)?;
        let k = usize::try_from(i - self.i_lo)
            .ok()
            .filter(|&k| k < self.states.len())
            .ok_or_else(|| Error::Config(format!("index {i} outside the window")))?;
        if y.len() != self.states[k].len() {
            return Err(Error::LengthMismatch { expected: self.states[k].len(), found: y.len() });
        }
        self.states[k] = y;
        Ok(())
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.i_lo..self.i_hi()
    }

    /// Relative deviation of the two edge states from `w`.
    pub fn edge_deviation(&self, w: &[S]) -> f64 {
        match (self.states.first(), self.states.last()) {
            (Some(a), Some(b)) => max_rel_diff(a, w).max(max_rel_diff(b, w)),
            _ => 0.0,
        }
    }

    pub fn edges_within(&self, w: &[S], tol: f64) -> bool {
        self.edge_deviation(w) <= tol
    }

    /// Weighted mean index of the deviation from `w`.
    pub fn deviation_centroid(&self, w: &[S]) -> Option<f64> {
        let (mut num, mut den) = (0.0, 0.0);
        for (i, y) in self.indices().zip(&self.states) {
            let d = max_rel_diff(y, w);
            num += i as f64 * d;
            den += d;
        }
        (den > 0.0).then(|| num / den)
    }

    pub fn to_f64(&self) -> StateSequence<f64> {
        StateSequence {
            i_lo: self.i_lo,
            states: self.states.iter().map(|s| s.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }
}

/// One carrier sweep from the left edge; returns the new states and the
/// relative deviation of the outgoing carrier from `z_{-infinity}`.
pub fn evolve_step<S: Scalar>(inst: &SystemInstance<S>, s: &StateSequence<S>) -> Result<(StateSequence<S>, f64)> {
    let (states, z) = sweep(inst, &s.states, inst.carrier.clone())?;
    let deviation = max_rel_diff(&z, &inst.carrier);
    Ok((StateSequence { i_lo: s.i_lo, states }, deviation))
}

fn sweep<S: Scalar>(inst: &SystemInstance<S>, states: &[Vec<S>], mut z: Vec<S>) -> Result<(Vec<Vec<S>>, Vec<S>)> {
    let mut out = Vec::with_capacity(states.len());
    for y in states {
        let (y_new, z_new) = inst.interaction.apply(&z, y)?;
        out.push(y_new);
        z = z_new;
    }
    Ok((out, z))
}

/// Repeated sweeps; element `k` of the result is the sequence after `k` steps.
pub fn evolve<S: Scalar>(inst: &SystemInstance<S>, s: &StateSequence<S>, steps: usize) -> Result<Vec<StateSequence<S>>> {
    let mut out = vec![s.clone()];
    for _ in 0..steps {
        let (next, _) = evolve_step(inst, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// States at time `m` read from the tau function on indices `i_lo..i_hi`.
pub fn soliton_states<S: Scalar>(
    inst: &SystemInstance<S>,
    tf: &TauFunction<S>,
    m: i64,
    i_lo: i64,
    i_hi: i64,
) -> Result<StateSequence<S>> {
    if tf.alpha() != inst.alpha() {
        return Err(Error::InvalidSpec("tau function and instance use different wire weights".into()));
    }
    let mut states = Vec::with_capacity((i_hi - i_lo).max(0) as usize);
    for i in i_lo..i_hi {
        let shift = inst.shift(i, m);
        let y = inst
            .chart
            .iter()
            .map(|c| {
                let s = c.base_label.plus(&shift);
                for l in [
                    s.clone(),
                    s.plus_unit(c.lower_wire),
                    s.plus_unit(c.upper_wire),
                    s.plus_unit(c.lower_wire).plus_unit(c.upper_wire),
                ] {
                    if !tau_eval(tf, &l)?.is_positive_strict() {
                        return Err(Error::NonPositiveTau(l.0));
                    }
                }
                vertex_weight(tf, &s, c.upper_wire, c.lower_wire)
            })
            .collect::<Result<Vec<S>>>()?;
        states.push(y);
    }
    StateSequence::new(i_lo, states)
}

/// `f_h(j)`, the `h`-th entry (from 1) of each state.
pub fn observable_fh<S: Scalar>(s: &StateSequence<S>, h: usize) -> Result<Vec<(i64, S)>> {
    let l = s.states.first().map_or(0, Vec::len);
    if h == 0 || h > l {
        return Err(Error::Config(format!("h = {h} outside 1..={l}")));
    }
    Ok(s.indices().zip(&s.states).map(|(i, y)| (i, y[h - 1].clone())).collect())
}

/// A word written as `p, rho^{-k}(p), ..., rho^{-rk}(p)` for a primitive glide `p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerDecomposition {
    pub block: Vec<usize>,
    pub offset: usize,
    pub copies: usize,
}

/// The shortest block of which `w` is a rotated power, if it is a glide.
pub fn primitive_decomposition(w: &AffineWord) -> Option<PowerDecomposition> {
    let len = w.len();
    for p in 1..=len {
        if !len.is_multiple_of(p) {
            continue;
        }
        let block = w.prefix(p);
        let Ok(g) = Glide::new(block.clone()) else {
            continue;
        };
        let k = g.offset() as i64;
        let matches = (0..len / p).all(|j| {
            rho_shift(&block, -(j as i64) * k).letters() == &w.letters()[j * p..(j + 1) * p]
        });
        if matches {
            return Some(PowerDecomposition { block: block.letters().to_vec(), offset: g.offset(), copies: len / p });
        }
    }
    None
}

/// Outcome of checking a carrier/state pair for commutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommuteReport {
    /// `v·u` is reduced, so `F` is defined.
    pub applicable: bool,
    /// `F(z, w) = (w, z)`, exactly in exact mode.
    pub commuting: bool,
    pub max_deviation: f64,
    pub carrier_power: Option<PowerDecomposition>,
    pub state_power: Option<PowerDecomposition>,
    /// `z` repeats with the carrier block length.
    pub carrier_periodic: Option<bool>,
    /// `w` repeats with the state block length.
    pub state_periodic: Option<bool>,
    /// The blocks themselves form a reduced product.
    pub blocks_applicable: Option<bool>,
    /// The block weights commute on their own.
    pub blocks_commuting: Option<bool>,
}

fn periodic<S: Scalar>(x: &[S], p: usize) -> bool {
    (p..x.len()).all(|i| x[i] == x[i - p])
}

fn commutes<S: Scalar>(u: &Glide, v: &Glide, z: &[S], w: &[S]) -> Result<Option<(bool, f64)>> {
    let vu = v.word().concat(u.word())?;
    if !is_reduced(&vu) {
        return Ok(None);
    }
    let (w2, z2) = Interaction::new(u, v)?.apply(z, w)?;
    let dev = max_rel_diff(&w2, w).max(max_rel_diff(&z2, z));
    let ok = if S::is_exact() { w2 == w && z2 == z } else { dev <= 1e-12 };
    Ok(Some((ok, dev)))
}

/// Checks `F(z, w) = (w, z)` and, for powers of primitive glides, whether
/// the weights repeat blockwise and commute block by block.
pub fn commuting_pair_check<S: Scalar>(carrier: &WeightedWord<S>, state: &WeightedWord<S>) -> Result<CommuteReport> {
    let v = Glide::new(carrier.word().clone())?;
    let u = Glide::new(state.word().clone())?;
    let (z, w) = (carrier.weights(), state.weights());
    let whole = commutes(&u, &v, z, w)?;
    let carrier_power = primitive_decomposition(v.word()).filter(|d| d.copies > 1);
    let state_power = primitive_decomposition(u.word()).filter(|d| d.copies > 1);
    let carrier_periodic = carrier_power.as_ref().map(|d| periodic(z, d.block.len()));
    let state_periodic = state_power.as_ref().map(|d| periodic(w, d.block.len()));
    let (mut blocks_applicable, mut blocks_commuting) = (None, None);
    if let (Some(cd), Some(sd)) = (&carrier_power, &state_power) {
        let vb = Glide::from_letters(v.n(), &cd.block)?;
        let ub = Glide::from_letters(u.n(), &sd.block)?;
        let res = commutes(&ub, &vb, &z[..cd.block.len()], &w[..sd.block.len()])?;
        blocks_applicable = Some(res.is_some());
        blocks_commuting = res.map(|(ok, _)| ok);
    }
    Ok(CommuteReport {
        applicable: whole.is_some(),
        commuting: whole.is_some_and(|(ok, _)| ok),
        max_deviation: whole.map_or(f64::NAN, |(_, d)| d),
        carrier_power,
        state_power,
        carrier_periodic,
        state_periodic,
        blocks_applicable,
        blocks_commuting,
    })
}

/// Every wire pair crossing in `v·u` also crosses within the `u` portion.
pub fn carrier_free_condition(u: &Glide, v: &Glide) -> Result<bool> {
    let vu = v.word().concat(u.word())?;
    let d = build_diagram(&vu, v.len())?;
    let in_u = d.crossing_pairs(v.len()..vu.len());
    Ok(d.crossing_pairs(0..v.len()).is_subset(&in_u))
}

/// Sensitivity of `y_0'` to the carrier entering `r` states to its left.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub radius: usize,
    pub epsilon: f64,
    /// `max_h |y_0'(perturbed) - y_0'| / (1 + |y_0'|)`.
    pub delta: f64,
}

/// Sweeps from index `-r` to `0` with carriers `z` and `(1 + eps) z`
/// and compares the resulting `y_0'`.
pub fn window_probe<S: Scalar>(inst: &SystemInstance<S>, s: &StateSequence<S>, r: usize, eps: &S) -> Result<ProbeReport> {
    let states: Vec<Vec<S>> = (-(r as i64)..=0)
        .map(|i| s.get(i).map_or_else(|| inst.vacuum.clone(), <[S]>::to_vec))
        .collect();
    let bumped: Vec<S> = inst.carrier.iter().map(|x| x.clone() * (S::one() + eps.clone())).collect();
    let (base, _) = sweep(inst, &states, inst.carrier.clone())?;
    let (pert, _) = sweep(inst, &states, bumped)?;
    Ok(ProbeReport {
        radius: r,
        epsilon: eps.to_f64(),
        delta: max_rel_diff(pert.last().unwrap(), base.last().unwrap()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::tau::{solve_partner, Component, SolitonSpec};

    fn glide(n: usize, letters: &[usize]) -> Glide {
        Glide::from_letters(n, letters).unwrap()
    }

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn emergence_instance() {
        let inst = make_instance(&glide(3, &[2, 1]), &glide(3, &[1, 2, 1, 0]), Some(rats(&[0, 3, 4]))).unwrap();
        assert_eq!(inst.vacuum(), rats(&[1, 4]).as_slice());
        assert_eq!(inst.carrier(), rats(&[3, 4, 1, 4]).as_slice());
    }

    #[test]
    fn automatic_weights() {
        let inst: SystemInstance<Rational> = make_instance(&glide(3, &[1, 2]), &glide(3, &[1, 0]), None).unwrap();
        assert!(inst.vacuum().iter().chain(inst.carrier()).all(|x| x.is_positive_strict()));
        assert!(make_instance::<Rational>(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(rats(&[1, 3, 4]))).is_ok());
        assert!(matches!(
            make_instance::<Rational>(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(rats(&[4, 3, 1]))),
            Err(Error::PositivityViolation { .. })
        ));
        assert!(matches!(
            make_instance::<Rational>(&glide(3, &[2, 1]), &glide(3, &[1, 2]), None),
            Err(Error::NotReduced(_))
        ));
    }

    #[test]
    fn vacuum_is_fixed() {
        let inst = make_instance(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(rats(&[1, 3, 4]))).unwrap();
        let s = StateSequence::vacuum(&inst, -5, 11);
        let (next, dev) = evolve_step(&inst, &s).unwrap();
        assert_eq!(next, s);
        assert_eq!(dev, 0.0);
    }

    #[test]
    fn single_state_sweep() {
        let inst = make_instance(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(rats(&[1, 3, 4]))).unwrap();
        let z = inst.carrier().to_vec();
        let (e, f) = (z[0].clone(), z[1].clone());
        let y = rats(&[2, 5, 7, 3]);
        let s = StateSequence::new(0, vec![y.clone()]).unwrap();
        let (next, _) = evolve_step(&inst, &s).unwrap();
        let a = y[0].clone();
        let expected = vec![
            f.clone() * a.clone() / (e.clone() + a.clone()),
            e.clone() + a.clone(),
            e.clone() * f / (e + a),
            y[1].clone(),
        ];
        assert_eq!(next.states()[0], expected);
    }

    #[test]
    fn sweep_is_causal() {
        let inst = make_instance(&glide(3, &[2, 1]), &glide(3, &[1, 2, 1, 0]), Some(rats(&[0, 3, 4]))).unwrap();
        let mut s = StateSequence::vacuum(&inst, 0, 6);
        s.set(2, rats(&[5, 2])).unwrap();
        let (a, _) = evolve_step(&inst, &s).unwrap();
        s.set(4, rats(&[7, 9])).unwrap();
        let (b, _) = evolve_step(&inst, &s).unwrap();
        assert_eq!(a.states()[..4], b.states()[..4]);
    }

    #[test]
    fn vacuum_soliton_states() {
        let inst = make_instance(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(rats(&[1, 3, 4]))).unwrap();
        let tf = TauFunction::new(SolitonSpec::vacuum(rats(&[1, 3, 4])).unwrap());
        let s = soliton_states(&inst, &tf, 3, -4, 4).unwrap();
        assert_eq!(s, StateSequence::vacuum(&inst, -4, 8));
    }

    #[test]
    fn one_soliton_step() {
        let alpha = vec![1.0, 3.0, 4.0];
        let inst = make_instance(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), Some(alpha.clone())).unwrap();
        let b = 3.2;
        let c = solve_partner(&alpha, b).unwrap();
        let tf = TauFunction::new(SolitonSpec::new(alpha, vec![Component::new(1.0, b, c)]).unwrap());
        let s0 = soliton_states(&inst, &tf, 0, -25, 25).unwrap();
        let s1 = soliton_states(&inst, &tf, 1, -25, 25).unwrap();
        assert!(s0.edges_within(inst.vacuum(), 1e-10));
        let (next, _) = evolve_step(&inst, &s0).unwrap();
        for (x, y) in next.states().iter().zip(s1.states()) {
            assert!(max_rel_diff(x, y) <= 1e-8, "{x:?} vs {y:?}");
        }
        assert_ne!(s0, s1);
    }

    #[test]
    fn observable_reads_entries() {
        let inst = make_instance(&glide(3, &[2, 1]), &glide(3, &[1, 2, 1, 0]), Some(rats(&[0, 3, 4]))).unwrap();
        let s = StateSequence::vacuum(&inst, 1, 3);
        assert_eq!(observable_fh(&s, 2).unwrap(), vec![(1, rat(4, 1)), (2, rat(4, 1)), (3, rat(4, 1))]);
        assert!(observable_fh(&s, 3).is_err());
    }

    #[test]
    fn doubled_commuting_pair() {
        let (d, f) = (rat(1, 1), rat(2, 1));
        let z = vec![d.clone() + f.clone(), d.clone(), d.clone() + f.clone(), d.clone()];
        let w = vec![d.clone() + f.clone(), f.clone(), d.clone() + f.clone(), f.clone()];
        let carrier = WeightedWord::new(AffineWord::new(3, vec![1, 2, 0, 1]).unwrap(), z).unwrap();
        let state = WeightedWord::new(AffineWord::new(3, vec![2, 1, 0, 2]).unwrap(), w).unwrap();
        let report = commuting_pair_check(&carrier, &state).unwrap();
        assert!(report.applicable && report.commuting);
        assert_eq!(report.carrier_power.as_ref().unwrap().block, vec![1, 2]);
        assert_eq!(report.state_power.as_ref().unwrap().block, vec![2, 1]);
        assert_eq!(report.carrier_periodic, Some(true));
        assert_eq!(report.state_periodic, Some(true));
        assert_eq!(report.blocks_applicable, Some(false));
    }

    #[test]
    fn signed_parameters_are_refused() {
        let word = AffineWord::new(3, vec![1, 2, 0, 1]).unwrap();
        assert!(WeightedWord::new(word, rats(&[-3, 1, 1, 1])).is_err());
    }

    #[test]
    fn carrier_free_examples() {
        assert!(carrier_free_condition(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0])).unwrap());
        assert!(!carrier_free_condition(&glide(3, &[1, 2]), &glide(3, &[1, 0])).unwrap());
        assert!(carrier_free_condition(&glide(3, &[1, 2]), &Glide::new(AffineWord::empty(3).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn probe_on_vacuum() {
        let free = make_instance(&glide(3, &[1, 2, 1, 0]), &glide(3, &[1, 0]), None::<Vec<Rational>>).unwrap();
        let s = StateSequence::vacuum(&free, -10, 11);
        assert_eq!(window_probe(&free, &s, 1, &rat(1, 10)).unwrap().delta, 0.0);
        let bound = make_instance(&glide(3, &[1, 2]), &glide(3, &[1, 0]), None::<Vec<Rational>>).unwrap();
        let s = StateSequence::vacuum(&bound, -10, 11);
        assert!(window_probe(&bound, &s, 5, &rat(1, 10)).unwrap().delta > 0.0);
    }

    #[test]
    fn primitive_blocks() {
        let d = primitive_decomposition(&AffineWord::new(3, vec![1, 2, 0, 1]).unwrap()).unwrap();
        assert_eq!((d.block, d.offset, d.copies), (vec![1, 2], 1, 2));
        let d = primitive_decomposition(&AffineWord::new(3, vec![1, 2, 1, 0]).unwrap()).unwrap();
        assert_eq!(d.copies, 1);
    }
}
