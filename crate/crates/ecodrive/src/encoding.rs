//! Fixed-width binary chromosomes and the bit-field decode grids.
//!
//! Fields pack left to right, most-significant bit first. Rates decode
//! on a 0.5 mph/s grid starting at 0.5 (a zero rate would stall the
//! cycle); cruise speeds decode on uniform grids whose top value is the
//! relevant limit. All decode arithmetic happens in mph and is
//! converted to SI in one place so that grid maxima compare bit-exactly
//! against the segment limits.

use rand::Rng;

use crate::cycle::{CandidateParams, Case1Params, Case2Params, CaseId};
use crate::error::{Error, Result};
use crate::units::mph_to_mps;

/// Widest layout `enumerate_all_with_guard` will ever agree to expand.
pub const MAX_ENUMERATION_BITS: u32 = 34;
/// Default guard for [`enumerate_all`]; wide enough for the
/// single-segment layout, rejects the restricted-road layout.
pub const DEFAULT_ENUMERATION_BITS: u32 = 24;

/// A fixed-width bit string. The value is kept as the unsigned integer
/// formed by reading the bits most-significant first, which is also the
/// tie-breaking order used by the optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chromosome {
    value: u64,
    width: u32,
}

impl Chromosome {
    pub fn new(value: u64, width: u32) -> Result<Self> {
        if width == 0 || width > 63 {
            return Err(Error::InvalidParams(format!(
                "chromosome width must be in 1..=63, got {width}"
            )));
        }
        if value >> width != 0 {
            return Err(Error::InvalidParams(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(Chromosome { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Bit at `pos` counted from the left (most significant bit = 0).
    pub fn bit(&self, pos: u32) -> bool {
        assert!(pos < self.width);
        (self.value >> (self.width - 1 - pos)) & 1 == 1
    }

    /// Copy with the bit at `pos` (from the left) flipped.
    pub fn flipped(&self, pos: u32) -> Self {
        assert!(pos < self.width);
        Chromosome {
            value: self.value ^ (1 << (self.width - 1 - pos)),
            width: self.width,
        }
    }

    /// Hamming distance to another chromosome of the same width.
    pub fn hamming(&self, other: &Self) -> u32 {
        (self.value ^ other.value).count_ones()
    }
}

impl std::fmt::Display for Chromosome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for pos in 0..self.width {
            write!(f, "{}", u8::from(self.bit(pos)))?;
        }
        Ok(())
    }
}

/// Decode rule for one bit field, producing mph or mph/s values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldDecode {
    /// 4 bits, `0.5 * (raw + 1)` mph/s: 0.5 to 8.0 in 0.5 steps.
    Rate4,
    /// 6 bits, `max_mph * raw / 63`: 0 to `max_mph` in 63 steps.
    Speed6 { max_mph: f64 },
    /// 4 bits, `limit_mph * (raw + 1) / 16`: excludes zero, tops out
    /// exactly at `limit_mph`.
    Speed4 { limit_mph: f64 },
}

impl FieldDecode {
    pub fn width(&self) -> u32 {
        match self {
            FieldDecode::Rate4 | FieldDecode::Speed4 { .. } => 4,
            FieldDecode::Speed6 { .. } => 6,
        }
    }

    /// Decoded value in mph (or mph/s for rates).
    pub fn decode_mph(&self, raw: u64) -> f64 {
        debug_assert!(raw < (1 << self.width()));
        match self {
            FieldDecode::Rate4 => 0.5 * (raw + 1) as f64,
            FieldDecode::Speed6 { max_mph } => max_mph * raw as f64 / 63.0,
            FieldDecode::Speed4 { limit_mph } => limit_mph * (raw + 1) as f64 / 16.0,
        }
    }

    /// Inverse of `decode_mph` for on-grid values (1e-6 mph tolerance).
    pub fn encode_mph(&self, value: f64) -> Option<u64> {
        let raw = match self {
            FieldDecode::Rate4 => (value / 0.5 - 1.0).round(),
            FieldDecode::Speed6 { max_mph } => (value * 63.0 / max_mph).round(),
            FieldDecode::Speed4 { limit_mph } => (value * 16.0 / limit_mph - 1.0).round(),
        };
        if !(0.0..=(((1u64 << self.width()) - 1) as f64)).contains(&raw) {
            return None;
        }
        let raw = raw as u64;
        ((self.decode_mph(raw) - value).abs() < 1e-6).then_some(raw)
    }

    /// All values this field can decode to, in raw order.
    pub fn grid_mph(&self) -> Vec<f64> {
        (0..1u64 << self.width())
            .map(|raw| self.decode_mph(raw))
            .collect()
    }
}

/// A named field inside a layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutField {
    pub name: &'static str,
    pub decode: FieldDecode,
}

/// Bit layout of a chromosome for one scenario family.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    case: CaseId,
    fields: Vec<LayoutField>,
}

impl Layout {
    /// 14-bit single-segment layout: 4-bit acceleration, 4-bit
    /// deceleration, 6-bit cruise speed. The speed grid tops out at
    /// 50.4 mph in 0.8 mph steps.
    pub fn case1() -> Self {
        Layout {
            case: CaseId::Case1,
            fields: vec![
                LayoutField {
                    name: "accel",
                    decode: FieldDecode::Rate4,
                },
                LayoutField {
                    name: "decel",
                    decode: FieldDecode::Rate4,
                },
                LayoutField {
                    name: "cruise_speed",
                    decode: FieldDecode::Speed6 { max_mph: 50.4 },
                },
            ],
        }
    }

    /// 32-bit restricted-road layout mirroring the single-segment field
    /// widths: rates on 4 bits, outer cruise speeds on 6 bits up to
    /// 75 mph, restricted speed on 4 bits up to 25 mph.
    pub fn case2() -> Self {
        Layout {
            case: CaseId::Case2,
            fields: vec![
                LayoutField {
                    name: "accel1",
                    decode: FieldDecode::Rate4,
                },
                LayoutField {
                    name: "cruise1",
                    decode: FieldDecode::Speed6 { max_mph: 75.0 },
                },
                LayoutField {
                    name: "decel1",
                    decode: FieldDecode::Rate4,
                },
                LayoutField {
                    name: "cruise2",
                    decode: FieldDecode::Speed4 { limit_mph: 25.0 },
                },
                LayoutField {
                    name: "accel2",
                    decode: FieldDecode::Rate4,
                },
                LayoutField {
                    name: "cruise3",
                    decode: FieldDecode::Speed6 { max_mph: 75.0 },
                },
                LayoutField {
                    name: "decel2",
                    decode: FieldDecode::Rate4,
                },
            ],
        }
    }

    pub fn for_case(case: CaseId) -> Self {
        match case {
            CaseId::Case1 => Layout::case1(),
            CaseId::Case2 => Layout::case2(),
        }
    }

    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn fields(&self) -> &[LayoutField] {
        &self.fields
    }

    pub fn total_bits(&self) -> u32 {
        self.fields.iter().map(|f| f.decode.width()).sum()
    }

    /// Raw field values extracted left to right.
    fn raw_fields(&self, c: &Chromosome) -> Result<Vec<u64>> {
        if c.width() != self.total_bits() {
            return Err(Error::LayoutMismatch {
                chromosome: c.width(),
                layout: self.total_bits(),
            });
        }
        let mut out = Vec::with_capacity(self.fields.len());
        let mut remaining = c.width();
        for field in &self.fields {
            let w = field.decode.width();
            remaining -= w;
            out.push((c.value() >> remaining) & ((1 << w) - 1));
        }
        Ok(out)
    }

    /// Decoded candidate in SI units.
    pub fn decode(&self, c: &Chromosome) -> Result<CandidateParams> {
        let raw = self.raw_fields(c)?;
        let mph: Vec<f64> = raw
            .iter()
            .zip(&self.fields)
            .map(|(&r, f)| f.decode.decode_mph(r))
            .collect();
        Ok(match self.case {
            CaseId::Case1 => CandidateParams::Case1(Case1Params {
                accel: mph_to_mps(mph[0]),
                decel: mph_to_mps(mph[1]),
                cruise_speed: mph_to_mps(mph[2]),
            }),
            CaseId::Case2 => CandidateParams::Case2(Case2Params {
                accel1: mph_to_mps(mph[0]),
                cruise1: mph_to_mps(mph[1]),
                decel1: mph_to_mps(mph[2]),
                cruise2: mph_to_mps(mph[3]),
                accel2: mph_to_mps(mph[4]),
                cruise3: mph_to_mps(mph[5]),
                decel2: mph_to_mps(mph[6]),
            }),
        })
    }

    /// Inverse of [`Layout::decode`] for on-grid candidates.
    pub fn encode(&self, params: &CandidateParams) -> Result<Chromosome> {
        use crate::units::mps_to_mph;
        let mph: Vec<f64> = match (self.case, params) {
            (CaseId::Case1, CandidateParams::Case1(p)) => {
                vec![p.accel, p.decel, p.cruise_speed]
            }
            (CaseId::Case2, CandidateParams::Case2(p)) => vec![
                p.accel1, p.cruise1, p.decel1, p.cruise2, p.accel2, p.cruise3, p.decel2,
            ],
            _ => {
                return Err(Error::InvalidParams(
                    "candidate case does not match layout case".into(),
                ))
            }
        }
        .into_iter()
        .map(mps_to_mph)
        .collect();

        let mut value = 0u64;
        for (v, field) in mph.iter().zip(&self.fields) {
            let raw = field.decode.encode_mph(*v).ok_or(Error::OffGrid {
                field: field.name,
                value: *v,
            })?;
            value = (value << field.decode.width()) | raw;
        }
        Chromosome::new(value, self.total_bits())
    }
}

/// Uniformly random chromosome for a layout; deterministic for a fixed
/// RNG state.
pub fn random_chromosome<R: Rng + ?Sized>(layout: &Layout, rng: &mut R) -> Chromosome {
    let width = layout.total_bits();
    let value = rng.random::<u64>() & ((1u64 << width) - 1);
    Chromosome { value, width }
}

/// Iterates every chromosome of the layout in ascending value order,
/// guarded against runaway enumeration.
pub fn enumerate_all(layout: &Layout) -> Result<impl Iterator<Item = Chromosome>> {
    enumerate_all_with_guard(layout, DEFAULT_ENUMERATION_BITS)
}

/// Like [`enumerate_all`] with an explicit guard, capped at
/// [`MAX_ENUMERATION_BITS`].
pub fn enumerate_all_with_guard(
    layout: &Layout,
    max_bits: u32,
) -> Result<impl Iterator<Item = Chromosome>> {
    enumerate_width(layout.total_bits(), max_bits)
}

/// Enumerates all 2^bits chromosomes of a given width.
pub fn enumerate_width(bits: u32, max_bits: u32) -> Result<impl Iterator<Item = Chromosome>> {
    let guard = max_bits.min(MAX_ENUMERATION_BITS);
    if bits > guard {
        return Err(Error::SpaceTooLarge { bits, max: guard });
    }
    Ok((0..1u64 << bits).map(move |value| Chromosome { value, width: bits }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mps_to_mph;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn decode1(layout: &Layout, value: u64) -> (f64, f64, f64) {
        let c = Chromosome::new(value, layout.total_bits()).unwrap();
        match layout.decode(&c).unwrap() {
            CandidateParams::Case1(p) => (
                mps_to_mph(p.accel),
                mps_to_mph(p.decel),
                mps_to_mph(p.cruise_speed),
            ),
            _ => unreachable!(),
        }
    }

    #[test]
    fn layout_widths() {
        assert_eq!(Layout::case1().total_bits(), 14);
        assert_eq!(Layout::case2().total_bits(), 32);
    }

    #[test]
    fn case1_decode_endpoints() {
        let layout = Layout::case1();
        let (a, b, v) = decode1(&layout, 0);
        assert_eq!((a, b, v), (0.5, 0.5, 0.0));
        let (a, b, v) = decode1(&layout, (1 << 14) - 1);
        assert_relative_eq!(a, 8.0, max_relative = 1e-12);
        assert_relative_eq!(b, 8.0, max_relative = 1e-12);
        assert_relative_eq!(v, 50.4, max_relative = 1e-12);
    }

    #[test]
    fn case1_decode_known_pattern() {
        // accel 1111, decel 0000, speed 111110.
        let layout = Layout::case1();
        let (a, b, v) = decode1(&layout, 0b11110000111110);
        assert_relative_eq!(a, 8.0, max_relative = 1e-12);
        assert_relative_eq!(b, 0.5, max_relative = 1e-12);
        assert_relative_eq!(v, 49.6, max_relative = 1e-9);
    }

    #[test]
    fn decode_rejects_width_mismatch() {
        let c = Chromosome::new(0, 14).unwrap();
        assert!(matches!(
            Layout::case2().decode(&c),
            Err(Error::LayoutMismatch { .. })
        ));
    }

    #[test]
    fn speed_grids_reach_their_limits_exactly() {
        // The feasibility boundary depends on the top grid values
        // comparing equal to the limits after the mph-to-SI conversion.
        let top6 = FieldDecode::Speed6 { max_mph: 75.0 }.decode_mph(63);
        assert_eq!(mph_to_mps(top6), mph_to_mps(75.0));
        let top4 = FieldDecode::Speed4 { limit_mph: 25.0 }.decode_mph(15);
        assert_eq!(mph_to_mps(top4), mph_to_mps(25.0));
    }

    #[test]
    fn random_chromosome_is_reproducible() {
        let layout = Layout::case1();
        let mut rng1 = ChaCha8Rng::seed_from_u64(42);
        let mut rng2 = ChaCha8Rng::seed_from_u64(42);
        let a1 = random_chromosome(&layout, &mut rng1);
        let a2 = random_chromosome(&layout, &mut rng1);
        assert_eq!(a1, random_chromosome(&layout, &mut rng2));
        assert_eq!(a2, random_chromosome(&layout, &mut rng2));
        assert_eq!(a1.width(), 14);
        assert_eq!(random_chromosome(&Layout::case2(), &mut rng1).width(), 32);
    }

    #[test]
    fn random_chromosome_bits_are_balanced() {
        let layout = Layout::case1();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mut ones = [0u32; 14];
        for _ in 0..n {
            let c = random_chromosome(&layout, &mut rng);
            for (pos, count) in ones.iter_mut().enumerate() {
                *count += u32::from(c.bit(pos as u32));
            }
        }
        for count in ones {
            let mean = count as f64 / n as f64;
            assert!((0.45..=0.55).contains(&mean), "bit mean {mean}");
        }
    }

    #[test]
    fn enumeration_counts_and_guard() {
        assert_eq!(enumerate_all(&Layout::case1()).unwrap().count(), 16_384);
        let toy: Vec<u64> = enumerate_width(1, 24).unwrap().map(|c| c.value()).collect();
        assert_eq!(toy, vec![0, 1]);
        assert!(matches!(
            enumerate_all(&Layout::case2()),
            Err(Error::SpaceTooLarge { bits: 32, .. })
        ));
        // Explicit override admits the 32-bit layout (not expanded here).
        assert!(enumerate_all_with_guard(&Layout::case2(), 32).is_ok());
        // The hard cap holds even when the caller asks for more.
        assert!(enumerate_all_with_guard(&Layout::case2(), 64).is_ok());
        assert!(matches!(
            enumerate_width(40, 64),
            Err(Error::SpaceTooLarge { bits: 40, max: 34 })
        ));
    }

    #[test]
    fn decode_is_injective_over_case1_space() {
        let layout = Layout::case1();
        let mut seen: HashSet<[u64; 3]> = HashSet::new();
        for c in enumerate_all(&layout).unwrap() {
            let key = match layout.decode(&c).unwrap() {
                CandidateParams::Case1(p) => [
                    p.accel.to_bits(),
                    p.decel.to_bits(),
                    p.cruise_speed.to_bits(),
                ],
                _ => unreachable!(),
            };
            assert!(seen.insert(key), "duplicate decode for {c}");
        }
        assert_eq!(seen.len(), 16_384);
    }

    #[test]
    fn encode_round_trips_every_case1_chromosome() {
        let layout = Layout::case1();
        for c in enumerate_all(&layout).unwrap() {
            let params = layout.decode(&c).unwrap();
            assert_eq!(layout.encode(&params).unwrap(), c);
        }
    }

    #[test]
    fn published_parameter_values_are_on_the_grids() {
        let rate = FieldDecode::Rate4;
        for v in [8.0, 0.5, 4.5, 2.0, 1.0] {
            assert!(rate.encode_mph(v).is_some(), "rate {v} off grid");
        }
        let outer = FieldDecode::Speed6 { max_mph: 75.0 };
        assert!(outer.encode_mph(75.0).is_some());
        let inner = FieldDecode::Speed4 { limit_mph: 25.0 };
        assert!(inner.encode_mph(25.0).is_some());
        let case1_speed = FieldDecode::Speed6 { max_mph: 50.4 };
        assert!(case1_speed.encode_mph(49.6).is_some());
        assert!(case1_speed.encode_mph(50.4).is_some());
        // And an off-grid value is rejected.
        assert!(case1_speed.encode_mph(49.9).is_none());
    }

    #[test]
    fn chromosome_display_is_msb_first() {
        let c = Chromosome::new(0b11110000111110, 14).unwrap();
        assert_eq!(c.to_string(), "11110000111110");
    }

    proptest! {
        #[test]
        fn case2_encode_round_trip(value in 0u64..(1u64 << 32)) {
            let layout = Layout::case2();
            let c = Chromosome::new(value, 32).unwrap();
            let params = layout.decode(&c).unwrap();
            prop_assert_eq!(layout.encode(&params).unwrap(), c);
        }

        #[test]
        fn decoded_values_stay_in_range(value in 0u64..(1u64 << 32)) {
            let layout = Layout::case2();
            let c = Chromosome::new(value, 32).unwrap();
            if let CandidateParams::Case2(p) = layout.decode(&c).unwrap() {
                for rate in [p.accel1, p.decel1, p.accel2, p.decel2] {
                    let mph = mps_to_mph(rate);
                    prop_assert!((0.5 - 1e-9..=8.0 + 1e-9).contains(&mph));
                }
                prop_assert!(mps_to_mph(p.cruise1) <= 75.0 + 1e-9);
                prop_assert!(mps_to_mph(p.cruise2) > 0.0);
                prop_assert!(mps_to_mph(p.cruise2) <= 25.0 + 1e-9);
                prop_assert!(mps_to_mph(p.cruise3) <= 75.0 + 1e-9);
            }
        }
    }
}
