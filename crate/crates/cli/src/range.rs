use std::fmt;
use std::str::FromStr;

/// `start:stop:step`, or `start:stop:factorx` for geometric stepping.
/// Both ends are inclusive when hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub stop: usize,
    pub step: Step,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Add(usize),
    Mul(usize),
}

impl NRange {
    pub fn single(n: usize) -> Self {
        Self { start: n, stop: n, step: Step::Add(1) }
    }

    pub fn values(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut n = self.start;
        while n <= self.stop {
            out.push(n);
            n = match self.step {
                Step::Add(s) => n + s,
                Step::Mul(f) => n * f,
            };
        }
        out
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct RangeError(String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RangeError {}

impl FromStr for NRange {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| RangeError(format!("bad n-range `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("expected integers"));
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, Step::Add(1)),
            [a, b, c] => {
                let step = match c.strip_suffix('x') {
                    Some(f) => Step::Mul(num(f)?),
                    None => Step::Add(num(c)?),
                };
                (num(a)?, num(b)?, step)
            }
            _ => return Err(bad("expected start:stop[:step]")),
        };
        if stop < start {
            return Err(bad("empty range"));
        }
        match step {
            Step::Add(0) => Err(bad("step must be positive")),
            Step::Mul(f) if f < 2 => Err(bad("factor must be at least 2")),
            Step::Mul(_) if start == 0 => Err(bad("geometric ranges must start above 0")),
            _ => Ok(Self { start, stop, step }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let r: NRange = "2:10:4".parse().unwrap();
        assert_eq!(r.values(), vec![2, 6, 10]);
        assert_eq!("3:5".parse::<NRange>().unwrap().values(), vec![3, 4, 5]);
    }

    #[test]
    fn geometric() {
        let r: NRange = "10:1000:10x".parse().unwrap();
        assert_eq!(r.values(), vec![10, 100, 1000]);
        assert_eq!("1:20:3x".parse::<NRange>().unwrap().values(), vec![1, 3, 9]);
    }

    #[test]
    fn rejects() {
        for s in ["5:1", "1:5:0", "0:10:2x", "1:10:1x", "a:b", "1", "1:2:3:4"] {
            assert!(s.parse::<NRange>().is_err(), "{s}");
        }
    }
}
