//! The timestep: an interleaved product of unitary collide-stream sweeps
//! for both axes followed by the two sparse potential operators, and the
//! multi-step run driver with diagnostic cadence.
//!
//! One second-order step applies, per axis, a four-entry sweep
//! `collide(+) stream_A(+) collide(−) stream_B(+)` and its mirrored
//! partner with all signs flipped, in the palindromic order
//! `P(+) P(−) P(−) P(+)`; mirrored sweeps cancel the odd-order error
//! terms. That is 16 unitary entries per axis, 32 in total, plus one
//! potential application per axis: 34 schedule entries. The step advances
//! physical time by ε (the first-order variant, 16 unitary entries, by ε/2).

use crate::error::{QlaError, Result};
use crate::lattice::{Axis, DielectricMap, QubitField};
use crate::operators::{
    collide_x, collide_y, compute_collision_angles, compute_potential_angles, potential_x,
    potential_y, CollisionAngles, EpsilonParameter, PotentialAngles, Sign, StreamSet,
};

/// One entry of the evolution schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleOp {
    Collide { axis: Axis, sign: Sign },
    Stream { axis: Axis, set: StreamSet, shift: i32 },
    Potential { axis: Axis },
}

impl ScheduleOp {
    pub fn is_unitary(&self) -> bool {
        !matches!(self, ScheduleOp::Potential { .. })
    }
}

/// Scheme order: the second-order scheme is the production default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeOrder {
    First,
    Second,
}

/// The ordered operator interleave constituting one timestep.
#[derive(Debug, Clone)]
pub struct EvolutionSchedule {
    entries: Vec<ScheduleOp>,
    epsilon: EpsilonParameter,
    order: SchemeOrder,
}

fn sweep(axis: Axis, sign: Sign, entries: &mut Vec<ScheduleOp>) {
    let shift = match sign {
        Sign::Plus => 1,
        Sign::Minus => -1,
    };
    entries.push(ScheduleOp::Collide { axis, sign });
    entries.push(ScheduleOp::Stream {
        axis,
        set: StreamSet::A,
        shift,
    });
    entries.push(ScheduleOp::Collide {
        axis,
        sign: sign.flip(),
    });
    entries.push(ScheduleOp::Stream {
        axis,
        set: StreamSet::B,
        shift,
    });
}

/// Deterministic second-order schedule: 32 unitary entries + 2 potentials.
pub fn build_schedule(eps: EpsilonParameter) -> EvolutionSchedule {
    build_schedule_with_order(eps, SchemeOrder::Second)
}

pub fn build_schedule_with_order(
    eps: EpsilonParameter,
    order: SchemeOrder,
) -> EvolutionSchedule {
    let mut entries = Vec::new();
    let pattern: &[Sign] = match order {
        SchemeOrder::Second => &[Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus],
        SchemeOrder::First => &[Sign::Plus, Sign::Minus],
    };
    for axis in [Axis::Y, Axis::X] {
        for &sign in pattern {
            sweep(axis, sign, &mut entries);
        }
    }
    entries.push(ScheduleOp::Potential { axis: Axis::X });
    entries.push(ScheduleOp::Potential { axis: Axis::Y });
    EvolutionSchedule {
        entries,
        epsilon: eps,
        order,
    }
}

impl EvolutionSchedule {
    pub fn entries(&self) -> &[ScheduleOp] {
        &self.entries
    }

    pub fn unitary_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_unitary()).count()
    }

    pub fn potential_count(&self) -> usize {
        self.entries.len() - self.unitary_count()
    }

    pub fn epsilon(&self) -> EpsilonParameter {
        self.epsilon
    }

    pub fn order(&self) -> SchemeOrder {
        self.order
    }

    /// Physical time advanced per iteration, in lattice units.
    pub fn dt(&self) -> f64 {
        match self.order {
            SchemeOrder::Second => self.epsilon.value(),
            SchemeOrder::First => self.epsilon.value() / 2.0,
        }
    }
}

/// Precomputed per-axis angle fields for a dielectric map.
#[derive(Debug, Clone)]
pub struct AngleSet {
    pub coll_x: CollisionAngles,
    pub coll_y: CollisionAngles,
    pub pot_x: PotentialAngles,
    pub pot_y: PotentialAngles,
}

impl AngleSet {
    pub fn compute(map: &DielectricMap, eps: EpsilonParameter, potential_scale: f64) -> AngleSet {
        AngleSet {
            coll_x: compute_collision_angles(map, eps, Axis::X),
            coll_y: compute_collision_angles(map, eps, Axis::Y),
            pot_x: compute_potential_angles(map, eps, Axis::X, potential_scale),
            pot_y: compute_potential_angles(map, eps, Axis::Y, potential_scale),
        }
    }
}

/// Evolving state: the field, the iteration count and the cached operator
/// data. Steps are strictly sequential; each is internally data-parallel.
#[derive(Debug, Clone)]
pub struct RunState {
    pub field: QubitField,
    pub t: u64,
    schedule: EvolutionSchedule,
    angles: AngleSet,
}

impl RunState {
    pub fn new(
        field: QubitField,
        map: &DielectricMap,
        schedule: EvolutionSchedule,
        potential_scale: f64,
    ) -> Result<RunState> {
        if field.geometry() != map.geometry() {
            return Err(QlaError::GeometryMismatch {
                expected_nx: map.geometry().nx(),
                expected_ny: map.geometry().ny(),
                nx: field.geometry().nx(),
                ny: field.geometry().ny(),
            });
        }
        let angles = AngleSet::compute(map, schedule.epsilon(), potential_scale);
        Ok(RunState {
            field,
            t: 0,
            schedule,
            angles,
        })
    }

    pub fn schedule(&self) -> &EvolutionSchedule {
        &self.schedule
    }

    /// Physical time elapsed, t · dt.
    pub fn time(&self) -> f64 {
        self.t as f64 * self.schedule.dt()
    }

    fn apply(&mut self, op: ScheduleOp) {
        match op {
            ScheduleOp::Collide { axis: Axis::Y, sign } => {
                collide_y(&mut self.field, &self.angles.coll_y, sign)
            }
            ScheduleOp::Collide { axis: Axis::X, sign } => {
                collide_x(&mut self.field, &self.angles.coll_x, sign)
            }
            ScheduleOp::Stream { axis, set, shift } => {
                crate::operators::stream(&mut self.field, axis, set, shift)
            }
            ScheduleOp::Potential { axis: Axis::Y } => {
                potential_y(&mut self.field, &self.angles.pot_y)
            }
            ScheduleOp::Potential { axis: Axis::X } => {
                potential_x(&mut self.field, &self.angles.pot_x)
            }
        }
    }

    /// Advance one iteration.
    pub fn step(&mut self) {
        let entries: Vec<ScheduleOp> = self.schedule.entries.clone();
        for op in entries {
            self.apply(op);
        }
        self.t += 1;
        #[cfg(debug_assertions)]
        if self.t % 64 == 0 {
            debug_assert!(self.field.find_non_finite().is_none());
        }
    }

    /// Apply the exact inverses of the unitary entries in reverse order.
    /// Potential entries are skipped; callers that need strict reversibility
    /// run with zero potential strength.
    pub fn step_unitary_inverse(&mut self) {
        let entries: Vec<ScheduleOp> = self.schedule.entries.clone();
        for op in entries.into_iter().rev() {
            match op {
                ScheduleOp::Collide { axis, sign } => self.apply(ScheduleOp::Collide {
                    axis,
                    sign: sign.flip(),
                }),
                ScheduleOp::Stream { axis, set, shift } => self.apply(ScheduleOp::Stream {
                    axis,
                    set,
                    shift: -shift,
                }),
                ScheduleOp::Potential { .. } => {}
            }
        }
        self.t = self.t.saturating_sub(1);
    }

    /// Run `n_steps` iterations, invoking `sink` at t ≡ 0 (mod cadence),
    /// inclusive of both t = 0 and the final step. A sink failure aborts
    /// the run immediately; the state keeps whatever progress was made.
    pub fn run<F>(&mut self, n_steps: u64, cadence: u64, mut sink: F) -> Result<()>
    where
        F: FnMut(&RunState) -> Result<()>,
    {
        assert!(cadence >= 1, "cadence must be at least 1");
        let end = self.t + n_steps;
        sink(self)?;
        while self.t < end {
            self.step();
            if self.t % cadence == 0 || self.t == end {
                if let Some(err) = self.field.find_non_finite() {
                    return Err(err);
                }
                sink(self)?;
            }
        }
        Ok(())
    }
}
