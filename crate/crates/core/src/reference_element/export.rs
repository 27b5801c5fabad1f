//! JSON export of a reference basis with exact rational coefficients.

use serde::{Deserialize, Serialize};

use super::{DofKind, ReferenceElementBasis};
use crate::polynomials::Poly3;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermDoc {
    pub exp: [u32; 3],
    pub coef: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorDoc {
    pub comp: [Vec<TermDoc>; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DofDoc {
    pub kind: String,
    pub entity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisDoc {
    pub r: usize,
    pub generators: Vec<GeneratorDoc>,
    pub dual: Vec<Vec<String>>,
    pub dofs: Vec<DofDoc>,
}

fn terms(p: &Poly3) -> Vec<TermDoc> {
    p.terms()
        .map(|(e, c)| TermDoc {
            exp: *e,
            coef: format!("{}/{}", c.numer(), c.denom()),
        })
        .collect()
}

pub fn to_document(basis: &ReferenceElementBasis) -> BasisDoc {
    BasisDoc {
        r: basis.r,
        generators: basis
            .generators
            .iter()
            .map(|g| GeneratorDoc {
                comp: std::array::from_fn(|k| terms(&g.components[k])),
            })
            .collect(),
        dual: basis
            .dual
            .iter()
            .map(|row| row.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect())
            .collect(),
        dofs: basis
            .dofs
            .iter()
            .map(|d| match d.kind {
                DofKind::EdgeMoment { order } => DofDoc {
                    kind: "edge_moment".into(),
                    entity: d.entity,
                    order: Some(order),
                    direction: None,
                },
                DofKind::FaceCurlTangential { direction } => DofDoc {
                    kind: "face_curl_tangential".into(),
                    entity: d.entity,
                    order: None,
                    direction: Some(direction + 1),
                },
            })
            .collect(),
    }
}

pub fn to_json(basis: &ReferenceElementBasis) -> String {
    serde_json::to_string_pretty(&to_document(basis)).expect("basis document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{rational, PolyVec3};
    use crate::reference_element::build_dual_basis;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn parse(s: &str) -> BigRational {
        let (n, d) = s.split_once('/').unwrap();
        BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap())
    }

    #[test]
    fn document_rebuilds_dual_functions() {
        let b = build_dual_basis(1).unwrap();
        let json = to_json(&b);
        let doc: BasisDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc.r, 1);
        assert_eq!(doc.generators.len(), 24);
        assert_eq!(doc.dual.len(), 24);
        assert_eq!(doc.dofs.len(), 24);
        assert_eq!(doc.dofs[23].kind, "face_curl_tangential");
        let gens: Vec<PolyVec3> = doc
            .generators
            .iter()
            .map(|g| PolyVec3 {
                components: std::array::from_fn(|k| {
                    let mut p = Poly3::zero();
                    for t in &g.comp[k] {
                        p.add_term(t.exp, parse(&t.coef));
                    }
                    p
                }),
            })
            .collect();
        let j = 5;
        let mut f = PolyVec3::zero();
        for (k, g) in gens.iter().enumerate() {
            f += &g.scale(&parse(&doc.dual[k][j]));
        }
        assert_eq!(f, b.functions[j]);
        assert_eq!(parse("3/64"), rational(3, 64));
    }
}
