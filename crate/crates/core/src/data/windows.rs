use super::DataError;

/// Sliding-window decomposition of a length-`sample_length` feature sequence.
///
/// Windows are `(start, end)` half-open ranges of length exactly `length` in
/// *padded* coordinates: when the sample is shorter than `length` it is
/// left-padded with `pad` zeros and a single window covers it. Consecutive
/// window starts differ by `jump`, with one final right-aligned window added
/// when the stride does not land on the end, so every position is covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPlan {
    pub length: usize,
    pub jump: usize,
    pub windows: Vec<(usize, usize)>,
    /// Zeros prepended to the sample; positive only when the sample is
    /// shorter than `length`. Padded positions carry no reconstruction loss.
    pub pad: usize,
    pub sample_length: usize,
}

impl WindowPlan {
    /// Total length after padding.
    pub fn padded_length(&self) -> usize {
        self.sample_length + self.pad
    }

    /// Windows covering padded position `p`, in plan order.
    pub fn covering(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.windows
            .iter()
            .enumerate()
            .filter(move |(_, &(s, e))| s <= p && p < e)
            .map(|(i, _)| i)
    }
}

/// Plan sliding windows of size `length` with stride `jump`.
pub fn plan_windows(
    sample_length: usize,
    length: usize,
    jump: usize,
) -> Result<WindowPlan, DataError> {
    if length == 0 {
        return Err(DataError::Domain("window length must be at least 1".into()));
    }
    if jump == 0 {
        return Err(DataError::Domain("window jump must be at least 1".into()));
    }
    if jump > length {
        // A stride wider than the window would leave positions uncovered.
        return Err(DataError::Domain(format!(
            "window jump {jump} exceeds window length {length}; coverage would have gaps"
        )));
    }
    if sample_length == 0 {
        return Err(DataError::Domain("sample length must be at least 1".into()));
    }

    if sample_length <= length {
        let pad = length - sample_length;
        return Ok(WindowPlan {
            length,
            jump,
            windows: vec![(0, length)],
            pad,
            sample_length,
        });
    }

    let mut windows = Vec::new();
    let mut start = 0;
    while start + length <= sample_length {
        windows.push((start, start + length));
        start += jump;
    }
    let last_end = windows.last().map(|&(_, e)| e).unwrap_or(0);
    if last_end < sample_length {
        windows.push((sample_length - length, sample_length));
    }
    Ok(WindowPlan {
        length,
        jump,
        windows,
        pad: 0,
        sample_length,
    })
}
