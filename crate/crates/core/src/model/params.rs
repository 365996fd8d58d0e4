use super::config::KiaeConfig;
use crate::numerics::RngState;

/// Offsets of one LSTM cell's parameters in the flat vector.
///
/// Gate rows are stacked in the fixed order input, forget, cell, output, so
/// `w` is `(4*hidden) x input`, `u` is `(4*hidden) x hidden`, and `b` has
/// `4*hidden` entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct LstmSeg {
    pub w: usize,
    pub u: usize,
    pub b: usize,
    pub input: usize,
    pub hidden: usize,
}

impl LstmSeg {
    fn size(input: usize, hidden: usize) -> usize {
        4 * hidden * input + 4 * hidden * hidden + 4 * hidden
    }
}

/// Offsets of one fully connected layer (`w`: output x input, then bias).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct FcSeg {
    pub w: usize,
    pub b: usize,
    pub input: usize,
    pub output: usize,
}

impl FcSeg {
    fn size(input: usize, output: usize) -> usize {
        output * input + output
    }
}

/// Flat-vector layout of every trainable parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct Layout {
    pub enc_fwd: LstmSeg,
    pub enc_bwd: LstmSeg,
    pub fc1: FcSeg,
    pub fc2: FcSeg,
    pub fc_repr: FcSeg,
    pub dec_fc1: FcSeg,
    pub dec_fc2: FcSeg,
    pub dec_lstm: LstmSeg,
    pub proj: FcSeg,
    pub total: usize,
}

impl Layout {
    pub fn new(cfg: &KiaeConfig) -> Self {
        let step = cfg.step_dim();
        let h = cfg.lstm_hidden;
        let a = cfg.fc_a;
        let b = cfg.fc_b;
        let r = cfg.repr_dim;

        fn lstm(cursor: &mut usize, input: usize, hidden: usize) -> LstmSeg {
            let seg = LstmSeg {
                w: *cursor,
                u: *cursor + 4 * hidden * input,
                b: *cursor + 4 * hidden * input + 4 * hidden * hidden,
                input,
                hidden,
            };
            *cursor += LstmSeg::size(input, hidden);
            seg
        }
        fn fc(cursor: &mut usize, input: usize, output: usize) -> FcSeg {
            let seg = FcSeg {
                w: *cursor,
                b: *cursor + output * input,
                input,
                output,
            };
            *cursor += FcSeg::size(input, output);
            seg
        }

        let mut cursor = 0usize;
        let enc_fwd = lstm(&mut cursor, step, h);
        let enc_bwd = lstm(&mut cursor, step, h);
        let fc1 = fc(&mut cursor, 2 * h, a);
        let fc2 = fc(&mut cursor, a, b);
        let fc_repr = fc(&mut cursor, b, r);
        let dec_fc1 = fc(&mut cursor, r, b);
        let dec_fc2 = fc(&mut cursor, b, a);
        let dec_lstm = lstm(&mut cursor, a, h);
        let proj = fc(&mut cursor, h, step);

        Layout {
            enc_fwd,
            enc_bwd,
            fc1,
            fc2,
            fc_repr,
            dec_fc1,
            dec_fc2,
            dec_lstm,
            proj,
            total: cursor,
        }
    }
}

/// Seeded initialization: each weight matrix and bias draws uniformly from
/// `[-1/sqrt(fan_in), 1/sqrt(fan_in)]` in layout order.
pub(super) fn init_params(layout: &Layout, rng: &mut RngState) -> Vec<f64> {
    let mut params = vec![0.0; layout.total];
    fn fill(params: &mut [f64], offset: usize, count: usize, fan_in: usize, rng: &mut RngState) {
        let bound = 1.0 / (fan_in as f64).sqrt();
        for v in params[offset..offset + count].iter_mut() {
            *v = rng.uniform_one(-bound, bound).unwrap();
        }
    }
    for seg in [layout.enc_fwd, layout.enc_bwd, layout.dec_lstm] {
        fill(
            &mut params,
            seg.w,
            4 * seg.hidden * seg.input,
            seg.input,
            rng,
        );
        fill(
            &mut params,
            seg.u,
            4 * seg.hidden * seg.hidden,
            seg.hidden,
            rng,
        );
        fill(&mut params, seg.b, 4 * seg.hidden, seg.hidden, rng);
    }
    for seg in [
        layout.fc1,
        layout.fc2,
        layout.fc_repr,
        layout.dec_fc1,
        layout.dec_fc2,
        layout.proj,
    ] {
        fill(&mut params, seg.w, seg.output * seg.input, seg.input, rng);
        fill(&mut params, seg.b, seg.output, seg.input, rng);
    }
    params
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_contiguous_and_ordered() {
        let mut cfg = KiaeConfig::new(5);
        cfg.lstm_hidden = 3;
        cfg.fc_a = 4;
        cfg.fc_b = 2;
        cfg.repr_dim = 2;
        let l = Layout::new(&cfg);
        assert_eq!(l.enc_fwd.w, 0);
        // fwd cell: 4*3*5 + 4*3*3 + 12 = 60 + 36 + 12 = 108
        assert_eq!(l.enc_bwd.w, 108);
        assert_eq!(l.fc1.w, 216);
        // fc1: 4*6 + 4 = 28
        assert_eq!(l.fc2.w, 216 + 28);
        let expected_total = 108 * 2                 // encoder cells
            + (4 * 6 + 4)                            // fc1 2h->a
            + (2 * 4 + 2)                            // fc2 a->b
            + (2 * 2 + 2)                            // repr b->r
            + (2 * 2 + 2)                            // dec fc r->b
            + (4 * 2 + 4)                            // dec fc b->a
            + (4 * 3 * 4 + 4 * 3 * 3 + 12)           // dec lstm (input a)
            + (5 * 3 + 5); // projection h->step
        assert_eq!(l.total, expected_total);
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let cfg = KiaeConfig::new(7);
        let layout = Layout::new(&cfg);
        let a = init_params(&layout, &mut RngState::new(4));
        let b = init_params(&layout, &mut RngState::new(4));
        let c = init_params(&layout, &mut RngState::new(5));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let bound = 1.0; // loosest possible fan-in is 1
        assert!(a.iter().all(|v| v.abs() <= bound));
    }
}
