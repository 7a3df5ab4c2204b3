//! Inclusive `start:stop:step` sweep ranges.
//!
//! Endpoints are included whenever they land within half a step of the
//! sampled ladder, so `0:1.5:0.05` yields 31 points even though 0.05 has no
//! exact binary representation. Points are generated as `start + i * step`
//! rather than by accumulation, which keeps every run bit-identical.

use std::str::FromStr;

const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..=MAX_POINTS {
            let v = self.start + i as f64 * self.step;
            if v > self.stop + 0.5 * self.step {
                break;
            }
            out.push(v);
        }
        out
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let number = |part: &str| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{part}` is not a number"))
        };
        let parts: Vec<&str> = text.split(':').collect();
        let range = match parts.as_slice() {
            [single] => {
                let v = number(single)?;
                Range {
                    start: v,
                    stop: v,
                    step: 1.0,
                }
            }
            [start, stop, step] => Range {
                start: number(start)?,
                stop: number(stop)?,
                step: number(step)?,
            },
            _ => return Err(format!("`{text}`: expected START:STOP:STEP or a single value")),
        };
        if !range.start.is_finite() || !range.stop.is_finite() || !range.step.is_finite() {
            return Err(format!("`{text}`: endpoints and step must be finite"));
        }
        if range.step <= 0.0 {
            return Err(format!("`{text}`: step must be positive"));
        }
        if range.start > range.stop {
            return Err(format!("`{text}`: start exceeds stop"));
        }
        if (range.stop - range.start) / range.step > (MAX_POINTS - 1) as f64 {
            return Err(format!("`{text}`: more than {MAX_POINTS} points"));
        }
        Ok(range)
    }
}

/// clap value parser hook.
pub fn parse_range(text: &str) -> Result<Range, String> {
    text.parse()
}
