//! Built-in metrics, structures and maps referenced by name from scenario files.

use crate::expr::{parse, Expr};
use crate::geometry::{ManifoldSpec, SamplingDomain};
use crate::hermitian::AlmostComplexField;
use crate::submersion::SmoothMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    Metric,
    Structure,
    Map,
}

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub kind: PresetKind,
    pub description: &'static str,
}

pub const CATALOG: &[Preset] = &[
    Preset {
        name: "euclidean-r4",
        kind: PresetKind::Metric,
        description: "flat metric dx1^2 + .. + dx4^2 on R^4 (worked examples)",
    },
    Preset {
        name: "conformal-r2",
        kind: PresetKind::Metric,
        description: "exp(2 x1)(dx1^2 + dx2^2) on R^2 (synthetic connection fixture)",
    },
    Preset {
        name: "canonical-phi",
        kind: PresetKind::Structure,
        description: "canonical complex structure on R^4: phi e1 = -e2, phi e3 = -e4 (worked examples)",
    },
    Preset {
        name: "twisted-phi",
        kind: PresetKind::Structure,
        description: "canonical structure conjugated by a rotation of angle x1 in the (e2,e3)-plane (synthetic non-nearly-Kaehler fixture)",
    },
    Preset {
        name: "map-example-i",
        kind: PresetKind::Map,
        description: "R^4 -> R^3, ((x1 + x2)/sqrt(2), x3, x4): totally geodesic fibres, f = 0",
    },
    Preset {
        name: "map-example-ii",
        kind: PresetKind::Map,
        description: "R^4 -> R^3, (sqrt(x1^2 + x2^2), x3, x4): Clairaut with f = ln sqrt(x1^2 + x2^2)",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    CATALOG.iter().find(|p| p.name == name)
}

fn parse_all(rows: &[&[&str]], dim: usize) -> Vec<Vec<Expr>> {
    rows.iter()
        .map(|r| r.iter().map(|t| parse(t, dim).expect("preset parses")).collect())
        .collect()
}

pub fn euclidean_r4() -> ManifoldSpec {
    ManifoldSpec::euclidean(4)
}

pub fn conformal_r2() -> ManifoldSpec {
    ManifoldSpec::new(
        parse_all(&[&["exp(2*x1)", "0"], &["0", "exp(2*x1)"]], 2),
        SamplingDomain::boxed(vec![(-1.0, 1.0); 2]),
    )
    .expect("preset is well formed")
}

pub fn canonical_phi() -> AlmostComplexField {
    AlmostComplexField::new(parse_all(
        &[
            &["0", "1", "0", "0"],
            &["-1", "0", "0", "0"],
            &["0", "0", "0", "1"],
            &["0", "0", "-1", "0"],
        ],
        4,
    ))
    .expect("preset is well formed")
}

/// `R(x1) J R(x1)^T` with `R` the rotation by `x1` in the `(e2, e3)`-plane.
pub fn twisted_phi() -> AlmostComplexField {
    let rot = parse_all(
        &[
            &["1", "0", "0", "0"],
            &["0", "cos(x1)", "-sin(x1)", "0"],
            &["0", "sin(x1)", "cos(x1)", "0"],
            &["0", "0", "0", "1"],
        ],
        4,
    );
    let j = parse_all(
        &[
            &["0", "1", "0", "0"],
            &["-1", "0", "0", "0"],
            &["0", "0", "0", "1"],
            &["0", "0", "-1", "0"],
        ],
        4,
    );
    let mul = |a: &[Vec<Expr>], b: &[Vec<Expr>], transpose_b: bool| -> Vec<Vec<Expr>> {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|k| {
                        Expr::sum((0..4).map(|l| {
                            let bl = if transpose_b { &b[k][l] } else { &b[l][k] };
                            Expr::mul(a[i][l].clone(), bl.clone())
                        }))
                    })
                    .collect()
            })
            .collect()
    };
    let rj = mul(&rot, &j, false);
    AlmostComplexField::new(mul(&rj, &rot, true)).expect("preset is well formed")
}

pub fn map_example_i() -> SmoothMap {
    SmoothMap::parse(&["(x1 + x2)/sqrt(2)", "x3", "x4"], 4).expect("preset parses")
}

pub fn map_example_ii() -> SmoothMap {
    SmoothMap::parse(&["sqrt(x1^2 + x2^2)", "x3", "x4"], 4).expect("preset parses")
}

pub fn metric(name: &str) -> Option<ManifoldSpec> {
    match name {
        "euclidean-r4" => Some(euclidean_r4()),
        "conformal-r2" => Some(conformal_r2()),
        _ => None,
    }
}

pub fn structure(name: &str) -> Option<AlmostComplexField> {
    match name {
        "canonical-phi" => Some(canonical_phi()),
        "twisted-phi" => Some(twisted_phi()),
        _ => None,
    }
}

pub fn map(name: &str) -> Option<SmoothMap> {
    match name {
        "map-example-i" => Some(map_example_i()),
        "map-example-ii" => Some(map_example_ii()),
        _ => None,
    }
}

/// Every preset expression, for derivative cross-checks.
pub fn all_expressions() -> Vec<(String, Expr)> {
    let mut out = Vec::new();
    for name in ["euclidean-r4", "conformal-r2"] {
        let m = metric(name).unwrap();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                out.push((format!("{name}[{},{}]", i + 1, j + 1), m.metric_entry(i, j).clone()));
            }
        }
    }
    for name in ["canonical-phi", "twisted-phi"] {
        let s = structure(name).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                out.push((format!("{name}[{},{}]", i + 1, j + 1), s.entry(i, j).clone()));
            }
        }
    }
    for name in ["map-example-i", "map-example-ii"] {
        let f = map(name).unwrap();
        for (a, c) in f.components().iter().enumerate() {
            out.push((format!("{name}[{}]", a + 1), c.clone()));
        }
    }
    out.push((
        "clairaut-f".into(),
        parse("ln(sqrt(x1^2+x2^2))", 4).expect("parses"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Matrix, Vector};

    #[test]
    fn catalog_names_resolve() {
        for p in CATALOG {
            let ok = match p.kind {
                PresetKind::Metric => metric(p.name).is_some(),
                PresetKind::Structure => structure(p.name).is_some(),
                PresetKind::Map => map(p.name).is_some(),
            };
            assert!(ok, "{}", p.name);
        }
        assert!(find("map-example-i").is_some());
        assert!(find("twisted-phi").is_some());
    }

    #[test]
    fn twisted_phi_matches_explicit_conjugation() {
        let s = twisted_phi();
        for t in [0.0, 0.3, -1.7, 2.5] {
            let p = Vector::from_vec(vec![t, 0.4, -0.2, 1.0]);
            let (c, sn) = (t.cos(), t.sin());
            let r = Matrix::from_row_slice(
                4,
                4,
                &[1., 0., 0., 0., 0., c, -sn, 0., 0., sn, c, 0., 0., 0., 0., 1.],
            );
            let j = Matrix::from_row_slice(
                4,
                4,
                &[0., 1., 0., 0., -1., 0., 0., 0., 0., 0., 0., 1., 0., 0., -1., 0.],
            );
            let want = &r * j * r.transpose();
            assert!((s.at(&p).unwrap() - want).amax() < 1e-15);
        }
    }
}
