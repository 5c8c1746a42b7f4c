//! Relabelling-invariant certificates.
//!
//! The certificate is the lexicographically smallest breadth-first encoding of
//! the combinatorial map over all starting sides. Starting from a side fixes a
//! triangle and its rotation; every other triangle is numbered in discovery
//! order and rotated so that its entry side comes first. Only orientation
//! preserving relabellings are quotiented out.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{Mode, Triangulation};

const FRONTIER: u32 = u32::MAX;

/// Canonical form of a triangulation, optionally with edge data.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCertificate(Vec<u8>);

impl CanonicalCertificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        if hex.len() > 24 {
            write!(f, "Cert({}..{})", &hex[..12], &hex[hex.len() - 8..])
        } else {
            write!(f, "Cert({hex})")
        }
    }
}

impl Triangulation {
    /// Certificate of the bare combinatorial map.
    pub fn certificate(&self) -> CanonicalCertificate {
        self.encode(None, &[])
    }

    /// Certificate of the map together with one datum per edge.
    pub fn certificate_with<D: Ord + ToString>(&self, data: &[D]) -> CanonicalCertificate {
        assert_eq!(data.len(), self.edge_count(), "one datum per edge");
        let distinct: Vec<&D> = data.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let ranks: Vec<u32> = data
            .iter()
            .map(|d| distinct.binary_search(&d).expect("present") as u32)
            .collect();
        let tail: Vec<String> = distinct.iter().map(|d| d.to_string()).collect();
        self.encode(Some(&ranks), &tail)
    }

    fn encode(&self, ranks: Option<&[u32]>, tail: &[String]) -> CanonicalCertificate {
        let t = self.triangle_count();
        let mut best: Option<Vec<u32>> = None;
        let mut code = Vec::with_capacity(6 * self.side_count());
        let mut label = vec![u32::MAX; t];
        let mut rot = vec![0usize; t];
        let mut queue = VecDeque::with_capacity(t);
        for start in 0..self.side_count() {
            code.clear();
            label.fill(u32::MAX);
            let t0 = start / 3;
            label[t0] = 0;
            rot[t0] = start % 3;
            queue.push_back(t0);
            let mut next_label = 1u32;
            while let Some(tri) = queue.pop_front() {
                for k in 0..3 {
                    let side = 3 * tri + (rot[tri] + k) % 3;
                    match self.gluing[side] {
                        None => code.push(FRONTIER),
                        Some(p) => {
                            let tp = p / 3;
                            if label[tp] == u32::MAX {
                                label[tp] = next_label;
                                next_label += 1;
                                rot[tp] = p % 3;
                                queue.push_back(tp);
                            }
                            let pos = (p % 3 + 3 - rot[tp]) % 3;
                            code.push(label[tp] * 3 + pos as u32);
                        }
                    }
                    if let Some(r) = ranks {
                        code.push(r[self.side_edge[side].0]);
                    }
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code.clone());
            }
        }
        let mut bytes = Vec::new();
        bytes.push(match self.mode {
            Mode::Closed => 0u8,
            Mode::Polygon => 1u8,
        });
        bytes.extend_from_slice(&(t as u32).to_be_bytes());
        for w in best.unwrap_or_default() {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        for s in tail {
            bytes.extend_from_slice(s.as_bytes());
            bytes.push(0);
        }
        CanonicalCertificate(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::super::surfaces::*;

    #[test]
    fn relabelled_torus_has_same_certificate() {
        let t = once_punctured_torus();
        let (r, _) = t.relabel(&[1, 0], &[2, 1]).unwrap();
        assert_ne!(r, t);
        assert_eq!(r.certificate(), t.certificate());
    }

    #[test]
    fn relabelling_keeps_data_certificate() {
        let t = genus_two_one_puncture();
        let data: Vec<u32> = (0..t.edge_count() as u32).map(|i| i * 7 % 5).collect();
        let order = [3, 5, 0, 1, 4, 2];
        let shift = [1, 0, 2, 2, 1, 0];
        let (r, _) = t.relabel(&order, &shift).unwrap();
        assert_eq!(r.certificate_with(&data), t.certificate_with(&data));
        let mut other = data.clone();
        other.swap(0, 1);
        if data[0] != data[1] {
            assert_ne!(r.certificate_with(&other), t.certificate_with(&data));
        }
    }

    #[test]
    fn torus_and_pentagon_differ() {
        let p = pentagon_be_ce();
        assert_ne!(once_punctured_torus().certificate(), p.tri.certificate());
    }

    #[test]
    fn data_values_matter() {
        let t = once_punctured_torus();
        let a = t.certificate_with(&[1, 2, 3]);
        assert_ne!(a, t.certificate_with(&[10, 20, 30]));
        // the torus map has a rotational symmetry permuting its edges cyclically
        let rotated = t.certificate_with(&[2, 3, 1]);
        assert_eq!(rotated, a);
        assert_ne!(t.certificate_with(&[2, 1, 3]), a);
    }
}
