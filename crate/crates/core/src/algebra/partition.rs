//! Integer partitions as Young diagrams.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    parts: Vec<u32>,
    size: u32,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = String;
    fn try_from(r: PartitionRepr) -> Result<Self, String> {
        let p = Partition::new(r.parts).ok_or("parts must be positive and weakly decreasing")?;
        if p.size() != r.size {
            return Err(format!("size {} does not match parts", r.size));
        }
        Ok(p)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr { size: p.size(), parts: p.parts }
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length, zero beyond the last row.
    pub fn row(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.row(0);
        let parts = (0..w).map(|j| self.parts.iter().filter(|&&p| p > j).count() as u32).collect();
        Partition { parts }
    }

    /// Boxes `(i, j)` with `j < parts[i]`, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    /// `parts[i] - j - 1`; negative for boxes outside the diagram.
    pub fn arm(&self, i: usize, j: usize) -> i64 {
        self.row(i) as i64 - j as i64 - 1
    }

    /// `conjugate[j] - i - 1`; negative for boxes outside the diagram.
    pub fn leg(&self, i: usize, j: usize) -> i64 {
        let col = self.parts.iter().filter(|&&p| p as usize > j).count();
        col as i64 - i as i64 - 1
    }

    pub fn hook(&self, i: usize, j: usize) -> i64 {
        self.arm(i, j) + self.leg(i, j) + 1
    }
}

/// All partitions of `n`, largest first part first, then reverse
/// lexicographic.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// p(n) via the usual dynamic program over part sizes.
pub fn partition_count(n: u32) -> BigInt {
    let n = n as usize;
    let mut dp = vec![BigInt::zero(); n + 1];
    dp[0] = BigInt::from(1);
    for part in 1..=n {
        for m in part..=n {
            let prev = dp[m - part].clone();
            dp[m] += prev;
        }
    }
    dp[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_counts() {
        let p4: Vec<Vec<u32>> = partitions_of(4).into_iter().map(|p| p.parts).collect();
        assert_eq!(p4, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(10).len(), 42);
    }

    #[test]
    fn arm_leg_hook() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate().parts(), &[2, 1, 1]);
        assert_eq!((p.arm(0, 0), p.leg(0, 0), p.hook(0, 0)), (2, 1, 4));
        assert_eq!((p.arm(0, 2), p.leg(0, 2)), (0, 0));
        // Outside the diagram: arm and leg go negative.
        assert_eq!((p.arm(1, 1), p.leg(1, 1)), (-1, -1));
    }

    #[test]
    fn json_shape() {
        let p = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"parts":[2,1],"size":3}"#);
        assert!(serde_json::from_str::<Partition>(r#"{"parts":[1,2],"size":3}"#).is_err());
    }
}
