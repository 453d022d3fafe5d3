//! Delivery timeline: batches arrive back to back, each one when the stock
//! from the previous batch has just run out.

use crate::error::{Error, Result};
use crate::model::Solution;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub time: Rational,
    /// Zero-based supplier index.
    pub supplier: usize,
    pub volume: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeline {
    pub events: Vec<Event>,
    /// Time at which the last batch is used up: delivered volume / lambda.
    pub horizon: Rational,
}

/// Orders batches by supplier, larger batches first, and times them.
pub fn build_schedule(sol: &Solution, lambda: Rational) -> Timeline {
    let mut batches: Vec<(usize, Rational)> = sol
        .deliveries
        .iter()
        .map(|d| (d.supplier, d.volume))
        .collect();
    batches.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    schedule_in_order(&batches, lambda)
}

/// Times the batches in the given order.
pub fn schedule_in_order(batches: &[(usize, Rational)], lambda: Rational) -> Timeline {
    let mut time = Rational::ZERO;
    let events = batches
        .iter()
        .map(|&(supplier, volume)| {
            let e = Event {
                time,
                supplier,
                volume,
            };
            time = time + volume / lambda;
            e
        })
        .collect();
    Timeline {
        events,
        horizon: time,
    }
}

/// Stock level at `t`, taken just after any delivery arriving at `t`.
pub fn stock_at(tl: &Timeline, t: Rational, lambda: Rational) -> Result<Rational> {
    if t.is_negative() || t > tl.horizon {
        return Err(Error::OutsideHorizon {
            time: t,
            horizon: tl.horizon,
        });
    }
    let arrived = tl.events.partition_point(|e| e.time <= t);
    if arrived == 0 {
        return Ok(Rational::ZERO);
    }
    let e = &tl.events[arrived - 1];
    Ok(e.volume - lambda * (t - e.time))
}

/// Exact area under the stock curve over `[0, horizon]`.
///
/// Each inter-delivery segment is linear, so its integral is the mean of the
/// level just after the arrival and just before the next one, times its
/// length.
pub fn stock_integral(tl: &Timeline, lambda: Rational) -> Rational {
    let half = Rational::new(1, 2);
    tl.events
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let end = tl.events.get(i + 1).map_or(tl.horizon, |next| next.time);
            let length = end - e.time;
            let start_level = e.volume;
            let end_level = e.volume - lambda * length;
            (start_level + end_level) * half * length
        })
        .sum()
}

/// `time_num,time_den,supplier,volume_num,volume_den`, one-based suppliers.
pub fn timeline_csv(tl: &Timeline) -> String {
    let mut out = String::from("time_num,time_den,supplier,volume_num,volume_den\n");
    for e in &tl.events {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.time.num(),
            e.time.den(),
            e.supplier + 1,
            e.volume.num(),
            e.volume.den()
        ));
    }
    out
}
