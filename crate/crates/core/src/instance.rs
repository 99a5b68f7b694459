//! Symmetric mean-field instances with i.i.d. edge weights.

use std::io::{Read, Write};

use crate::distributions::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::rng::RngStream;

pub const MAGIC: &[u8; 8] = b"MFTSPINS";
pub const FORMAT_VERSION: u32 = 1;

/// Largest city count stored densely (about 8 GiB of weights).
pub const MAX_DENSE_N: usize = 46_000;

/// Upper-triangular weights `L_ij`, `i < j`, in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n: usize,
    weights: Vec<f64>,
    row_offset: Vec<usize>,
    seed: u64,
    spec: DistributionSpec,
}

#[inline]
fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn row_offsets(n: usize) -> Vec<usize> {
    // offset(i) = index of (i, i + 1)
    (0..n).map(|i| i * n - i * (i + 1) / 2).collect()
}

impl Instance {
    /// Draws `n(n-1)/2` weights in canonical order from `RngStream::new(seed)`.
    pub fn generate(n: usize, spec: DistributionSpec, seed: u64) -> Result<Self> {
        check_n(n)?;
        let mut rng = RngStream::new(seed);
        let weights = (0..pair_count(n)).map(|_| spec.sample(&mut rng)).collect();
        Ok(Self {
            n,
            weights,
            row_offset: row_offsets(n),
            seed,
            spec,
        })
    }

    /// Wraps explicit weights given in canonical order.
    pub fn from_weights(
        n: usize,
        weights: Vec<f64>,
        spec: DistributionSpec,
        seed: u64,
    ) -> Result<Self> {
        check_n(n)?;
        if weights.len() != pair_count(n) {
            return domain(format!(
                "expected {} weights for n = {n}, got {}",
                pair_count(n),
                weights.len()
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return domain(format!(
                "weights must be finite and non-negative, found {w}"
            ));
        }
        Ok(Self {
            n,
            weights,
            row_offset: row_offsets(n),
            seed,
            spec,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec(&self) -> DistributionSpec {
        self.spec
    }

    /// Weights in canonical order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.n || j >= self.n {
            return domain(format!(
                "city index out of range for n = {}: ({i}, {j})",
                self.n
            ));
        }
        if i == j {
            return domain(format!("no self-loop weight for city {i}"));
        }
        Ok(self.weight_unchecked(i, j))
    }

    /// Symmetric lookup for `i != j`, both in range.
    #[inline]
    pub fn weight_unchecked(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j && i < self.n && j < self.n);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.weights[self.row_offset[a] + (b - a - 1)]
    }

    /// Copy with every weight multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::from_weights(
            self.n,
            self.weights.iter().map(|w| w * lambda).collect(),
            self.spec,
            self.seed,
        )
    }

    /// Full `n x n` matrix with zero diagonal.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            self.weight_unchecked(i, j)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Binary export: magic, version, n, seed, spec string, then the weights
    /// as little-endian doubles in canonical order.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        let spec = self.spec.to_string();
        out.write_all(MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(self.n as u64).to_le_bytes())?;
        out.write_all(&self.seed.to_le_bytes())?;
        out.write_all(&(spec.len() as u32).to_le_bytes())?;
        out.write_all(spec.as_bytes())?;
        for w in &self.weights {
            out.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("not an instance file (bad magic)".into()));
        }
        let version = u32::from_le_bytes(read_array(&mut input)?);
        if version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported instance format version {version}"
            )));
        }
        let n = u64::from_le_bytes(read_array(&mut input)?) as usize;
        check_n(n)?;
        let seed = u64::from_le_bytes(read_array(&mut input)?);
        let len = u32::from_le_bytes(read_array(&mut input)?) as usize;
        let mut spec_bytes = vec![0u8; len];
        input.read_exact(&mut spec_bytes)?;
        let spec: DistributionSpec = String::from_utf8(spec_bytes)
            .map_err(|e| Error::Parse(e.to_string()))?
            .parse()?;
        let mut weights = Vec::with_capacity(pair_count(n));
        for _ in 0..pair_count(n) {
            weights.push(f64::from_le_bytes(read_array(&mut input)?));
        }
        Self::from_weights(n, weights, spec, seed)
    }

    /// Debug CSV, one `i,j,weight` row per unordered pair. Limited to n <= 100.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        if self.n > 100 {
            return Err(Error::Resource(format!(
                "CSV export is limited to n <= 100, got {}",
                self.n
            )));
        }
        writeln!(out, "i,j,weight")?;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                writeln!(out, "{i},{j},{}", self.weight_unchecked(i, j))?;
            }
        }
        Ok(())
    }
}

fn read_array<R: Read, const N: usize>(input: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf)?;
    Ok(buf)
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return domain(format!("a tour needs at least 3 cities, got n = {n}"));
    }
    if n > MAX_DENSE_N {
        return Err(Error::Resource(format!(
            "n = {n} exceeds the dense storage cap {MAX_DENSE_N}; use streaming mode"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp1() -> DistributionSpec {
        DistributionSpec::exponential(1.0).unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        let a = Instance::generate(3, exp1(), 17).unwrap();
        let b = Instance::generate(3, exp1(), 17).unwrap();
        assert_eq!(a.weights().len(), 3);
        assert_eq!(a, b);
        assert_ne!(a, Instance::generate(3, exp1(), 18).unwrap());
    }

    #[test]
    fn uniform_support() {
        let inst = Instance::generate(100, DistributionSpec::uniform(1.0).unwrap(), 3).unwrap();
        assert_eq!(inst.weights().len(), 4950);
        assert!(inst.weights().iter().all(|w| (0.0..=1.0).contains(w)));
    }

    #[test]
    fn symmetric_lookup_and_layout() {
        let inst = Instance::generate(12, exp1(), 5).unwrap();
        assert_eq!(inst.weight(2, 7).unwrap(), inst.weight(7, 2).unwrap());
        let first = exp1().sample(&mut RngStream::new(5));
        assert_eq!(inst.weight(0, 1).unwrap(), first);
        // canonical row-major order
        let mut k = 0;
        for i in 0..12 {
            for j in (i + 1)..12 {
                assert_eq!(inst.weight(i, j).unwrap(), inst.weights()[k]);
                k += 1;
            }
        }
    }

    #[test]
    fn invalid_queries() {
        let inst = Instance::generate(5, exp1(), 0).unwrap();
        assert!(inst.weight(2, 2).is_err());
        assert!(inst.weight(0, 5).is_err());
        assert!(Instance::generate(2, exp1(), 0).is_err());
        assert!(Instance::from_weights(3, vec![1.0, 2.0], exp1(), 0).is_err());
        assert!(Instance::from_weights(3, vec![1.0, -2.0, 0.5], exp1(), 0).is_err());
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let spec = DistributionSpec::weibull(1.5, 0.75).unwrap();
        let inst = Instance::generate(40, spec, 123).unwrap();
        let mut buf = Vec::new();
        inst.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        let back = Instance::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.to_matrix(), inst.to_matrix());
        for (a, b) in back.weights().iter().zip(inst.weights()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.seed(), 123);
        assert_eq!(back.spec(), spec);
    }

    #[test]
    fn binary_rejects_garbage() {
        assert!(Instance::read_binary(&b"NOTMAGIC\x01\x00\x00\x00"[..]).is_err());
    }

    #[test]
    fn csv_export() {
        let inst = Instance::from_weights(3, vec![0.5, 0.25, 2.0], exp1(), 0).unwrap();
        let mut buf = Vec::new();
        inst.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "i,j,weight\n0,1,0.5\n0,2,0.25\n1,2,2\n"
        );
        let big = Instance::generate(101, exp1(), 0).unwrap();
        assert!(big.write_csv(Vec::new()).is_err());
    }
}
