use serde_json::{json, Value};

use super::SpanError;
use crate::algebra::{AbelianGroup, AlgebraError, Character, CyclotomicNumber, GroupRingElement, Rational};

/// A `π0(S) × π0(T)` matrix over `QG`. Rows and columns are indexed by
/// canonical component representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanMatrix {
    group: AbelianGroup,
    row_names: Vec<String>,
    col_names: Vec<String>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<Vec<GroupRingElement>>,
}

impl SpanMatrix {
    pub fn new(
        group: AbelianGroup,
        row_names: Vec<String>,
        col_names: Vec<String>,
        rows: Vec<usize>,
        cols: Vec<usize>,
        entries: Vec<Vec<GroupRingElement>>,
    ) -> Self {
        debug_assert_eq!(entries.len(), rows.len());
        debug_assert!(entries.iter().all(|r| r.len() == cols.len()));
        SpanMatrix {
            group,
            row_names,
            col_names,
            rows,
            cols,
            entries,
        }
    }

    /// A diagonal matrix with the given entries, sharing row and column index.
    pub fn diagonal(group: &AbelianGroup, names: Vec<String>, index: Vec<usize>, diag: Vec<GroupRingElement>) -> Self {
        let n = diag.len();
        let mut entries = vec![vec![GroupRingElement::zero(group); n]; n];
        for (i, e) in diag.into_iter().enumerate() {
            entries[i][i] = e;
        }
        SpanMatrix::new(group.clone(), names.clone(), names, index.clone(), index, entries)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn row_index(&self) -> &[usize] {
        &self.rows
    }

    pub fn col_index(&self) -> &[usize] {
        &self.cols
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<GroupRingElement>] {
        &self.entries
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_nonnegative())
    }

    /// Entrywise `ρ`.
    pub fn apply_character(&self, rho: &Character) -> Result<CharacterMatrix, SpanError> {
        if rho.group() != &self.group {
            return Err(AlgebraError::GroupMismatch.into());
        }
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|e| rho.apply(e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CharacterMatrix {
            conductor: rho.conductor(),
            row_names: self.row_names.clone(),
            col_names: self.col_names.clone(),
            entries,
        })
    }

    /// One line per row, entries separated by ` | `.
    pub fn render_text(&self) -> String {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.render()).collect::<Vec<_>>().join(" | "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.cyclic_orders(),
            "rows": self.row_names,
            "cols": self.col_names,
            "entries": self.entries.iter()
                .map(|row| row.iter().map(|e| e.render()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

fn check_product(a: &SpanMatrix, b: &SpanMatrix) -> Result<(), SpanError> {
    if a.group != b.group {
        return Err(AlgebraError::GroupMismatch.into());
    }
    if a.cols != b.rows {
        return Err(SpanError::Shape(format!(
            "cannot multiply {}x{} by {}x{} with different middle index",
            a.row_count(),
            a.col_count(),
            b.row_count(),
            b.col_count()
        )));
    }
    Ok(())
}

/// `(AB)(c1, c2) = Σ_d B(d, c2) · A(c1, d)`, the order that stays valid
/// for non-commutative group rings.
pub fn matrix_multiply(a: &SpanMatrix, b: &SpanMatrix) -> Result<SpanMatrix, SpanError> {
    multiply_with(a, b, |x, y| y.mul(x))
}

/// The textbook order `Σ_d A(c1, d) · B(d, c2)`; agrees with
/// [`matrix_multiply`] because `G` is abelian.
pub fn matrix_multiply_commuted(a: &SpanMatrix, b: &SpanMatrix) -> Result<SpanMatrix, SpanError> {
    multiply_with(a, b, |x, y| x.mul(y))
}

fn multiply_with(
    a: &SpanMatrix,
    b: &SpanMatrix,
    product: impl Fn(&GroupRingElement, &GroupRingElement) -> Result<GroupRingElement, AlgebraError>,
) -> Result<SpanMatrix, SpanError> {
    check_product(a, b)?;
    let mut entries = Vec::with_capacity(a.row_count());
    for i in 0..a.row_count() {
        let mut row = Vec::with_capacity(b.col_count());
        for j in 0..b.col_count() {
            let mut acc = GroupRingElement::zero(&a.group);
            for d in 0..a.col_count() {
                acc = acc.add(&product(&a.entries[i][d], &b.entries[d][j])?)?;
            }
            row.push(acc);
        }
        entries.push(row);
    }
    Ok(SpanMatrix::new(
        a.group.clone(),
        a.row_names.clone(),
        b.col_names.clone(),
        a.rows.clone(),
        b.cols.clone(),
        entries,
    ))
}

/// A matrix over `Q(ζ_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMatrix {
    conductor: usize,
    row_names: Vec<String>,
    col_names: Vec<String>,
    entries: Vec<Vec<CyclotomicNumber>>,
}

impl CharacterMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<CyclotomicNumber>] {
        &self.entries
    }

    pub fn row_count(&self) -> usize {
        self.entries.len()
    }

    pub fn col_count(&self) -> usize {
        self.col_names.len()
    }

    pub fn is_identity(&self) -> bool {
        let one = Rational::from_integer(1.into());
        self.row_count() == self.col_count()
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, e)| {
                    if i == j {
                        e.as_rational().as_ref() == Some(&one)
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Same convention as [`matrix_multiply`].
    pub fn multiply(&self, other: &CharacterMatrix) -> Result<CharacterMatrix, SpanError> {
        if self.conductor != other.conductor {
            return Err(AlgebraError::ConductorMismatch(self.conductor, other.conductor).into());
        }
        if self.col_count() != other.row_count() {
            return Err(SpanError::Shape("inner dimensions differ".into()));
        }
        let mut entries = Vec::with_capacity(self.row_count());
        for i in 0..self.row_count() {
            let mut row = Vec::with_capacity(other.col_count());
            for j in 0..other.col_count() {
                let mut acc = CyclotomicNumber::zero(self.conductor)?;
                for d in 0..self.col_count() {
                    acc = acc.add(&other.entries[d][j].mul(&self.entries[i][d])?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        Ok(CharacterMatrix {
            conductor: self.conductor,
            row_names: self.row_names.clone(),
            col_names: other.col_names.clone(),
            entries,
        })
    }

    /// Entries as polynomials in `z` with a decimal hint, e.g. `z [0.000000000000+1.000000000000i]`.
    pub fn render_text(&self) -> String {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| format!("{} [{}]", e.render(), e.decimal_hint()))
                    .collect::<Vec<_>>()
                    .join(" | ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conductor": self.conductor,
            "rows": self.row_names,
            "cols": self.col_names,
            "entries": self.entries.iter()
                .map(|row| row.iter().map(|e| json!({"value": e.render(), "decimal": e.decimal_hint()})).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Elem};

    fn one_by_one(g: &AbelianGroup, e: GroupRingElement) -> SpanMatrix {
        SpanMatrix::new(g.clone(), vec!["*".into()], vec!["*".into()], vec![0], vec![0], vec![vec![e]])
    }

    #[test]
    fn one_by_one_products_add_labels() {
        let g = AbelianGroup::cyclic(5).unwrap();
        let x = one_by_one(&g, GroupRingElement::basis(&g, Elem(2)));
        let y = one_by_one(&g, GroupRingElement::basis(&g, Elem(4)));
        let xy = matrix_multiply(&x, &y).unwrap();
        assert_eq!(xy.entry(0, 0), &GroupRingElement::basis(&g, Elem(1)));
        assert_eq!(xy, matrix_multiply_commuted(&x, &y).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = AbelianGroup::cyclic(2).unwrap();
        let x = one_by_one(&g, GroupRingElement::one(&g));
        let d = SpanMatrix::diagonal(&g, vec!["a".into(), "b".into()], vec![0, 1], vec![GroupRingElement::one(&g); 2]);
        assert!(matrix_multiply(&x, &d).is_err());
        assert!(d.is_diagonal());
    }

    #[test]
    fn rendering() {
        let g = AbelianGroup::cyclic(2).unwrap();
        let half = GroupRingElement::from_terms(&g, [(Elem(0), rational(1, 2)), (Elem(1), rational(1, 2))]);
        let m = SpanMatrix::diagonal(&g, vec!["a".into(), "b".into()], vec![0, 1], vec![half.clone(), half]);
        assert_eq!(
            m.render_text(),
            "1/2*g(0) + 1/2*g(1) | 0\n0 | 1/2*g(0) + 1/2*g(1)"
        );
        let rho = Character::standard(&g);
        let cm = m.apply_character(&rho).unwrap();
        assert_eq!(cm.render_text(), "0 [0.000000000000] | 0 [0.000000000000]\n0 [0.000000000000] | 0 [0.000000000000]");
    }
}
