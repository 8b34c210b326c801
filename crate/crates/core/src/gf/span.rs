use super::{Field, Scalar};

/// Incrementally grown span of vectors, remembering how each reduced row
/// was assembled from the inserted vectors so dependencies can be reported
/// as explicit relations.
#[derive(Clone, Debug)]
pub struct Span {
    len: usize,
    rows: Vec<Row>,
    inserted: usize,
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    /// Normalized so that `vec[pivot] = 1`.
    vec: Vec<Scalar>,
    /// `vec = Σ combo[j] * inserted_j`.
    combo: Vec<Scalar>,
}

/// Outcome of [`Span::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector was independent and now extends the span.
    Independent,
    /// The vector equals `Σ c[j] * inserted_j` over the earlier insertions.
    Dependent(Vec<Scalar>),
}

impl Span {
    pub fn new(len: usize) -> Self {
        Self { len, rows: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the span. Returns the residue and the
    /// coefficients `t` (over earlier insertions) with `residue = v + Σ t_j inserted_j`.
    fn reduce(&self, field: &Field, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(v.len(), self.len);
        let mut res = v.to_vec();
        let mut t = vec![Scalar::ZERO; self.inserted];
        for row in &self.rows {
            let c = res[row.pivot];
            if c.is_zero() {
                continue;
            }
            let nc = field.neg(c);
            field.axpy(&mut res, nc, &row.vec);
            field.axpy(&mut t[..row.combo.len()], nc, &row.combo);
        }
        (res, t)
    }

    pub fn contains(&self, field: &Field, v: &[Scalar]) -> bool {
        self.reduce(field, v).0.iter().all(|c| c.is_zero())
    }

    /// Coefficients over the inserted vectors expressing `v`, if it lies in
    /// the span.
    pub fn express(&self, field: &Field, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (res, t) = self.reduce(field, v);
        res.iter().all(|c| c.is_zero()).then(|| t.into_iter().map(|c| field.neg(c)).collect())
    }

    pub fn insert(&mut self, field: &Field, v: &[Scalar]) -> Insert {
        let (res, t) = self.reduce(field, v);
        match res.iter().position(|c| !c.is_zero()) {
            None => Insert::Dependent(t.into_iter().map(|c| field.neg(c)).collect()),
            Some(pivot) => {
                let inv = field.inv(res[pivot]).expect("nonzero pivot");
                let mut combo = t;
                combo.push(Scalar::ONE);
                let vec = res.iter().map(|&c| field.mul(c, inv)).collect();
                let combo = combo.iter().map(|&c| field.mul(c, inv)).collect();
                self.rows.push(Row { pivot, vec, combo });
                self.inserted += 1;
                Insert::Independent
            }
        }
    }
}
