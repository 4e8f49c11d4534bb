//! Text-based document formats: matrices of linear forms, form spaces,
//! and certificates. All coefficients are exact strings; round-trips are
//! lossless.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certify::RankCertificate;
use crate::error::{Error, Result};
use crate::ideals::FormSpace;
use crate::model::LinearFormMatrix;
use crate::poly::{monomial_basis, Alphabet, Poly};
use crate::scalar::{Field, Scalar};

pub const MATRIX_SCHEMA: u32 = 1;
pub const CERT_SCHEMA: u32 = 1;
pub const FORMS_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl FieldDescriptor {
    pub fn of(field: Field) -> FieldDescriptor {
        match field {
            Field::Rational => FieldDescriptor { kind: "Q".into(), p: None },
            Field::Prime(p) => FieldDescriptor { kind: "Fp".into(), p: Some(p) },
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        match (self.kind.as_str(), self.p) {
            ("Q", None) => Ok(Field::Rational),
            ("Fp", Some(p)) => Field::prime_checked(p, 1),
            _ => Err(Error::invalid(format!("bad field descriptor {self:?}"))),
        }
    }
}

/// Serialized matrix of linear forms with provenance metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub schema: u32,
    pub n: usize,
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    /// `entries[i][j]` is the coefficient vector of the linear form at
    /// `(i, j)`, one exact string per variable.
    pub entries: Vec<Vec<Vec<String>>>,
    pub metadata: MatrixMetadata,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct MatrixMetadata {
    #[serde(default)]
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_rank: Option<usize>,
    #[serde(default)]
    pub label: String,
}

impl MatrixDocument {
    pub fn from_matrix(
        m: &LinearFormMatrix,
        label: &str,
        source: &str,
        claimed_rank: Option<usize>,
    ) -> MatrixDocument {
        let entries = (0..m.rows)
            .map(|i| {
                (0..m.cols)
                    .map(|j| {
                        (0..=m.n).map(|k| m.coeff_at(i, j, k).to_coeff_string()).collect()
                    })
                    .collect()
            })
            .collect();
        MatrixDocument {
            schema: MATRIX_SCHEMA,
            n: m.n,
            field: FieldDescriptor::of(m.field),
            rows: m.rows,
            cols: m.cols,
            entries,
            metadata: MatrixMetadata {
                source: source.into(),
                claimed_rank,
                label: label.into(),
            },
        }
    }

    pub fn to_matrix(&self) -> Result<LinearFormMatrix> {
        let field = self.field.to_field()?;
        if self.entries.len() != self.rows {
            return Err(Error::invalid("row count mismatch"));
        }
        let mut m = LinearFormMatrix::zero(field, self.n, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(Error::invalid("column count mismatch"));
            }
            for (j, cell) in row.iter().enumerate() {
                if cell.len() != self.n + 1 {
                    return Err(Error::invalid("coefficient count mismatch"));
                }
                for (k, s) in cell.iter().enumerate() {
                    m.set_coeff(i, j, k, Scalar::parse(field, s)?);
                }
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<MatrixDocument> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical content digest for certificates.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_string(self).expect("serializable"));
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized certificate with the digest of the matrix it talks about.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema: u32,
    pub tool_version: String,
    pub input_digest: String,
    pub certificate: RankCertificate,
}

impl CertificateDocument {
    pub fn new(input: &MatrixDocument, certificate: RankCertificate) -> CertificateDocument {
        CertificateDocument {
            schema: CERT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            input_digest: input.digest(),
            certificate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<CertificateDocument> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A form space on disk: a list of degree-`c` forms by monomial
/// coefficient vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormsDocument {
    pub schema: u32,
    pub n: usize,
    pub degree: u32,
    pub field: FieldDescriptor,
    /// One coefficient vector per form, over the graded-lex monomial basis.
    pub forms: Vec<Vec<String>>,
    #[serde(default)]
    pub label: String,
}

impl FormsDocument {
    pub fn from_space(p: &FormSpace, label: &str) -> FormsDocument {
        FormsDocument {
            schema: FORMS_SCHEMA,
            n: p.n,
            degree: p.c,
            field: FieldDescriptor::of(p.field),
            forms: p
                .basis()
                .iter()
                .map(|f| f.coeff_vec().iter().map(Scalar::to_coeff_string).collect())
                .collect(),
            label: label.into(),
        }
    }

    pub fn to_space(&self) -> Result<FormSpace> {
        let field = self.field.to_field()?;
        let basis = monomial_basis(self.n, self.degree);
        let polys: Vec<Poly> = self
            .forms
            .iter()
            .map(|coeffs| {
                if coeffs.len() != basis.len() {
                    return Err(Error::invalid("coefficient vector length mismatch"));
                }
                Poly::from_terms(
                    field,
                    Alphabet::Dual,
                    self.n,
                    self.degree,
                    basis
                        .iter()
                        .cloned()
                        .zip(coeffs.iter().map(|s| Scalar::parse(field, s)))
                        .map(|(m, c)| c.map(|c| (m, c)))
                        .collect::<Result<Vec<_>>>()?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        FormSpace::new(self.n, self.degree, polys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<FormsDocument> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn matrix_round_trip_is_exact() {
        for entry in corpus::all_entries(Field::Rational) {
            let doc = MatrixDocument::from_matrix(
                &entry.matrix,
                entry.label,
                entry.description,
                Some(entry.claimed_rank),
            );
            let back = MatrixDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back.to_matrix().unwrap(), entry.matrix, "{}", entry.label);
            assert_eq!(back.digest(), doc.digest());
        }
    }

    #[test]
    fn forms_round_trip() {
        let p = corpus::net_space(Field::Rational);
        let doc = FormsDocument::from_space(&p, "net");
        let back = FormsDocument::from_json(&doc.to_json()).unwrap().to_space().unwrap();
        assert_eq!(back.as_subspace(), p.as_subspace());
    }

    #[test]
    fn rational_coefficients_survive() {
        let f = Field::Rational;
        let mut m = LinearFormMatrix::zero(f, 1, 1, 1);
        m.set_coeff(0, 0, 0, f.from_ratio(-22, 7).unwrap());
        m.set_coeff(0, 0, 1, f.from_ratio(1, 3).unwrap());
        let doc = MatrixDocument::from_matrix(&m, "t", "test", None);
        assert_eq!(doc.entries[0][0], vec!["-22/7", "1/3"]);
        assert_eq!(MatrixDocument::from_json(&doc.to_json()).unwrap().to_matrix().unwrap(), m);
    }
}
