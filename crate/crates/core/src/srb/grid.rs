use crate::error::{Error, Result};

/// Control periods at which the baseline is evaluated: ascending, starting
/// at 0 and ending at the planned finish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlGrid {
    times: Vec<u32>,
}

impl ControlGrid {
    pub fn new(times: Vec<u32>) -> Result<Self> {
        if times.first() != Some(&0) {
            return Err(Error::Domain("control grid must start at 0".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "control grid must be strictly increasing".into(),
            ));
        }
        Ok(ControlGrid { times })
    }

    /// `0, step, 2 step, ...` with `finish` always included as the last point.
    pub fn with_step(finish: u32, step: u32) -> Result<Self> {
        if step == 0 {
            return Err(Error::Domain("grid step must be at least 1".into()));
        }
        let mut times: Vec<u32> = (0..finish).step_by(step as usize).collect();
        times.push(finish);
        Self::new(times)
    }

    pub fn unit(finish: u32) -> Self {
        ControlGrid {
            times: (0..=finish).collect(),
        }
    }

    pub fn times(&self) -> &[u32] {
        &self.times
    }

    pub fn finish(&self) -> u32 {
        *self.times.last().expect("grid is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_grid_includes_finish() {
        assert_eq!(ControlGrid::with_step(7, 3).unwrap().times(), &[0, 3, 6, 7]);
        assert_eq!(ControlGrid::with_step(6, 3).unwrap().times(), &[0, 3, 6]);
        assert_eq!(ControlGrid::with_step(0, 1).unwrap().times(), &[0]);
        assert_eq!(ControlGrid::with_step(4, 1).unwrap(), ControlGrid::unit(4));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(ControlGrid::with_step(5, 0).is_err());
        assert!(ControlGrid::new(vec![1, 2]).is_err());
        assert!(ControlGrid::new(vec![0, 2, 2]).is_err());
    }
}
