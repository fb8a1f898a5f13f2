//! Recursive halving schedules that switch off couplings inside the control
//! register, and the variant that keeps one pair coupled.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pattern::{FlipEvent, FlipSchedule, Frame};

/// Binary code per group from repeated ceiling halving over `levels` splits.
/// Bit `j` (0-based) is the split at level `j + 1`; the first part of each
/// split gets 0. A group left alone before the last level is padded with 1.
pub fn halving_codes(groups: usize, levels: usize) -> Vec<Vec<u8>> {
    let mut codes = vec![Vec::with_capacity(levels); groups];
    fn assign(codes: &mut [Vec<u8>], members: &[usize], level: usize, levels: usize) {
        if level == levels {
            return;
        }
        if members.len() <= 1 {
            for &m in members {
                codes[m].extend(std::iter::repeat(1).take(levels - level));
            }
            return;
        }
        let mid = members.len().div_ceil(2);
        for (k, &m) in members.iter().enumerate() {
            codes[m].push(u8::from(k >= mid));
        }
        assign(codes, &members[..mid], level + 1, levels);
        assign(codes, &members[mid..], level + 1, levels);
    }
    let members: Vec<usize> = (0..groups).collect();
    assign(&mut codes, &members, 0, levels);
    codes
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Flip sets between the `2^levels` segments: entry `s` (1-based) holds the
/// qubits flipped after segment `s`, already reduced mod 2.
fn gap_sets(codes: &[Vec<u8>], levels: usize) -> Vec<Vec<bool>> {
    let n = codes.len();
    let segments = 1usize << levels;
    (1..=segments)
        .map(|s| {
            let mut set = vec![false; n];
            for j in 0..levels {
                if s % (1 << j) == 0 {
                    for (q, code) in codes.iter().enumerate() {
                        if code[j] == 0 {
                            set[q] ^= true;
                        }
                    }
                }
            }
            set
        })
        .collect()
}

fn events_from(sets: &BTreeMap<u64, Vec<bool>>, half_unit: f64) -> Vec<FlipEvent> {
    sets.iter()
        .flat_map(|(&key, set)| {
            set.iter()
                .enumerate()
                .filter(|(_, f)| **f)
                .map(move |(q, _)| FlipEvent {
                    t: key as f64 * half_unit,
                    qubit: q,
                })
        })
        .collect()
}

/// Result of [`decoupling_schedule`].
#[derive(Debug, Clone, PartialEq)]
pub struct Decoupling {
    pub schedule: FlipSchedule,
    pub levels: usize,
    pub codes: Vec<Vec<u8>>,
    pub segment_time: f64,
    /// Whether every control qubit spends equal time in both orientations,
    /// so couplings to qubits outside the register average out.
    pub cancels_external: bool,
}

impl Decoupling {
    pub fn flip_count(&self) -> usize {
        self.schedule.flip_count()
    }
}

/// `W^(k)` with `k = ceil(log2 n)` over segments of length `t`, followed by
/// one global flip at half the total time. The global flip is kept as `n`
/// separate events even where it coincides with a gap flip.
pub fn decoupling_schedule(n: usize, t: f64) -> Result<Decoupling> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "decoupling needs at least two control qubits, got {n}"
        )));
    }
    check_segment(t)?;
    let levels = ceil_log2(n);
    let codes = halving_codes(n, levels);
    let mut sets = BTreeMap::new();
    for (s, set) in gap_sets(&codes, levels).into_iter().enumerate() {
        if set.iter().any(|f| *f) {
            sets.insert(2 * (s as u64 + 1), set);
        }
    }
    let mut events = events_from(&sets, t / 2.0);
    let total = (1u64 << levels) as f64 * t;
    events.extend((0..n).map(|q| FlipEvent { t: total / 2.0, qubit: q }));
    let schedule = FlipSchedule::new(total, events, Frame::up(n))?;
    let cancels_external = schedule.effective_vector().iter().all(|x| x.abs() < 1e-12);
    Ok(Decoupling {
        schedule,
        levels,
        codes,
        segment_time: t,
        cancels_external,
    })
}

/// Result of [`pair_isolation_schedule`].
#[derive(Debug, Clone, PartialEq)]
pub struct PairIsolation {
    pub schedule: FlipSchedule,
    pub levels: usize,
    pub segment_time: f64,
    pub pair: (usize, usize),
}

impl PairIsolation {
    /// Time over which the pair coupling acts; the whole window.
    pub fn effective_time(&self) -> f64 {
        self.schedule.duration()
    }
}

/// Halving schedule in which `pair` shares one code, so its coupling survives
/// while every other coupling inside the register and every coupling to the
/// outside averages to zero. A global flip at mid-window cancels external
/// couplings; a second one at the end restores the starting orientation.
///
/// The code that is all ones except a trailing 0 would keep its external
/// coupling under the mid-window flip, so an extra level is added whenever
/// the group count would otherwise use it.
pub fn pair_isolation_schedule(n: usize, pair: (usize, usize), t: f64) -> Result<PairIsolation> {
    let (a, b) = pair;
    if a == b || a >= n || b >= n {
        return Err(Error::InvalidArgument(format!("invalid pair ({a}, {b}) for {n} qubits")));
    }
    check_segment(t)?;
    let groups = n - 1;
    let mut levels = ceil_log2(groups);
    if groups >= 2 && groups.is_power_of_two() {
        levels += 1;
    }
    let group_codes = halving_codes(groups, levels);
    let (lo, hi) = (a.min(b), a.max(b));
    // `hi` joins `lo`'s group; later qubits shift down by one.
    let group_of = |q: usize| match q.cmp(&hi) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Equal => lo,
        std::cmp::Ordering::Greater => q - 1,
    };
    let codes: Vec<Vec<u8>> = (0..n).map(|q| group_codes[group_of(q)].clone()).collect();
    let segments = 1u64 << levels;
    let mut sets: BTreeMap<u64, Vec<bool>> = BTreeMap::new();
    for (s, set) in gap_sets(&codes, levels).into_iter().enumerate() {
        sets.insert(2 * (s as u64 + 1), set);
    }
    for key in [segments, 2 * segments] {
        let entry = sets.entry(key).or_insert_with(|| vec![false; n]);
        for f in entry.iter_mut() {
            *f ^= true;
        }
    }
    sets.retain(|_, set| set.iter().any(|f| *f));
    let schedule = FlipSchedule::new(segments as f64 * t, events_from(&sets, t / 2.0), Frame::up(n))?;
    if schedule.effective_vector().iter().any(|x| x.abs() > 1e-12) {
        return Err(Error::InvalidSchedule("pair isolation leaves an external coupling".into()));
    }
    Ok(PairIsolation {
        schedule,
        levels,
        segment_time: t,
        pair: (a, b),
    })
}

fn check_segment(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidSchedule(format!("segment time must be positive, got {t}")));
    }
    Ok(())
}

/// Time-averaged product of orientations of qubits `a` and `b`; the factor
/// multiplying their mutual coupling over the window.
pub fn pair_average(schedule: &FlipSchedule, a: usize, b: usize) -> f64 {
    let mut sa = schedule.initial_frame().sign(a);
    let mut sb = schedule.initial_frame().sign(b);
    let mut last = 0.0;
    let mut acc = 0.0;
    for e in schedule.events() {
        acc += sa * sb * (e.t - last);
        last = e.t;
        if e.qubit == a {
            sa = -sa;
        }
        if e.qubit == b {
            sb = -sb;
        }
    }
    acc += sa * sb * (schedule.duration() - last);
    if schedule.duration() > 0.0 {
        acc / schedule.duration()
    } else {
        sa * sb
    }
}
