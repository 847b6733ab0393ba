use crate::error::{Error, Result};
use crate::validation::ValidationReport;

/// A simplicial finite set truncated at level `N`.
///
/// Simplices carry stable integer indices within their level; face and
/// degeneracy operators are stored as index arrays. Construction only
/// checks shapes and index ranges; the simplicial identities are checked
/// by [`SimplicialSpace::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSpace {
    truncation: usize,
    ids: Vec<Vec<String>>,
    /// `faces[n][i][x] = ∂_i x` for `x ∈ U_n`, `1 ≤ n`, `0 ≤ i ≤ n`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][i][x] = s_i x` for `x ∈ U_n`, `n < N`, `0 ≤ i ≤ n`.
    degeneracies: Vec<Vec<Vec<usize>>>,
    /// `front[k][p][x] = ρ_{k,p} x`.
    front: Vec<Vec<Vec<usize>>>,
    /// `back[k][p][x] = τ_{k,p} x`.
    back: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSpace {
    /// `faces[0]` must be empty; `degeneracies` has one entry per level below `N`.
    pub fn new(
        truncation: usize,
        ids: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let levels = truncation + 1;
        if ids.len() != levels {
            return Err(Error::structural(format!(
                "truncation {truncation} needs {levels} levels, got {}",
                ids.len()
            )));
        }
        if faces.len() != levels {
            return Err(Error::structural(format!(
                "expected face data for {levels} levels, got {}",
                faces.len()
            )));
        }
        if degeneracies.len() != truncation {
            return Err(Error::structural(format!(
                "expected degeneracy data for {truncation} levels, got {}",
                degeneracies.len()
            )));
        }
        for (n, level) in ids.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for id in level {
                if !seen.insert(id.as_str()) {
                    return Err(Error::structural(format!("duplicate simplex id {id:?} at level {n}")));
                }
            }
        }
        for (n, ops) in faces.iter().enumerate() {
            let expected = if n == 0 { 0 } else { n + 1 };
            if ops.len() != expected {
                return Err(Error::structural(format!(
                    "level {n} needs {expected} face maps, got {}",
                    ops.len()
                )));
            }
            for (i, op) in ops.iter().enumerate() {
                check_index_array(op, ids[n].len(), ids[n - 1].len(), || {
                    format!("face ∂_{i} on level {n}")
                })?;
            }
        }
        for (n, ops) in degeneracies.iter().enumerate() {
            if ops.len() != n + 1 {
                return Err(Error::structural(format!(
                    "level {n} needs {} degeneracy maps, got {}",
                    n + 1,
                    ops.len()
                )));
            }
            for (i, op) in ops.iter().enumerate() {
                check_index_array(op, ids[n].len(), ids[n + 1].len(), || {
                    format!("degeneracy s_{i} on level {n}")
                })?;
            }
        }
        let mut space = SimplicialSpace {
            truncation,
            ids,
            faces,
            degeneracies,
            front: Vec::new(),
            back: Vec::new(),
        };
        space.build_face_composites();
        Ok(space)
    }

    fn build_face_composites(&mut self) {
        let levels = self.truncation + 1;
        let mut front = Vec::with_capacity(levels);
        let mut back = Vec::with_capacity(levels);
        for k in 0..levels {
            let identity: Vec<usize> = (0..self.ids[k].len()).collect();
            let mut fk = vec![Vec::new(); k + 1];
            let mut bk = vec![Vec::new(); k + 1];
            fk[k] = identity.clone();
            bk[k] = identity;
            for p in (0..k).rev() {
                // ρ_{k,p} = ∂_{p+1} ∘ ρ_{k,p+1};  τ_{k,p} = ∂_0 ∘ τ_{k,p+1}
                fk[p] = fk[p + 1].iter().map(|&x| self.faces[p + 1][p + 1][x]).collect();
                bk[p] = bk[p + 1].iter().map(|&x| self.faces[p + 1][0][x]).collect();
            }
            front.push(fk);
            back.push(bk);
        }
        self.front = front;
        self.back = back;
    }

    /// The space with one point in every level.
    pub fn point(truncation: usize) -> Self {
        let ids = (0..=truncation).map(|_| vec!["*".to_string()]).collect();
        let faces = (0..=truncation)
            .map(|n| if n == 0 { Vec::new() } else { vec![vec![0]; n + 1] })
            .collect();
        let degeneracies = (0..truncation).map(|n| vec![vec![0]; n + 1]).collect();
        SimplicialSpace::new(truncation, ids, faces, degeneracies).expect("point space")
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.ids[n].len()
    }

    pub fn ids(&self, n: usize) -> &[String] {
        &self.ids[n]
    }

    pub fn id(&self, n: usize, x: usize) -> &str {
        &self.ids[n][x]
    }

    pub fn find(&self, n: usize, id: &str) -> Option<usize> {
        self.ids.get(n)?.iter().position(|s| s == id)
    }

    /// `∂_i` on level `n`.
    pub fn face(&self, n: usize, i: usize) -> &[usize] {
        &self.faces[n][i]
    }

    /// `s_i` on level `n`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &[usize] {
        &self.degeneracies[n][i]
    }

    pub fn face_data(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn degeneracy_data(&self) -> &[Vec<Vec<usize>>] {
        &self.degeneracies
    }

    /// Front face map `ρ_{k,p} = ∂_{p+1} ∘ … ∘ ∂_k : U_k → U_p`.
    pub fn front_face(&self, k: usize, p: usize) -> Result<&[usize]> {
        self.check_face_range(k, p)?;
        Ok(&self.front[k][p])
    }

    /// Back face map `τ_{k,p} = ∂_0 ∘ … ∘ ∂_0` (`k − p` factors).
    pub fn back_face(&self, k: usize, p: usize) -> Result<&[usize]> {
        self.check_face_range(k, p)?;
        Ok(&self.back[k][p])
    }

    fn check_face_range(&self, k: usize, p: usize) -> Result<()> {
        if k < p {
            return Err(Error::structural(format!(
                "face composite needs k ≥ p, got k={k}, p={p}"
            )));
        }
        if k > self.truncation {
            return Err(Error::Truncation(format!(
                "level {k} exceeds truncation {}",
                self.truncation
            )));
        }
        Ok(())
    }

    /// Unchecked `ρ_{k,p}(x)` for hot loops.
    #[inline]
    pub(crate) fn rho(&self, k: usize, p: usize, x: usize) -> usize {
        self.front[k][p][x]
    }

    /// Unchecked `τ_{k,p}(x)` for hot loops.
    #[inline]
    pub(crate) fn tau(&self, k: usize, p: usize, x: usize) -> usize {
        self.back[k][p][x]
    }

    /// First vertex `ρ_{k,0}(x)`.
    #[inline]
    pub fn first_vertex(&self, k: usize, x: usize) -> usize {
        self.front[k][0][x]
    }

    /// Last vertex `τ_{k,0}(x)`.
    #[inline]
    pub fn last_vertex(&self, k: usize, x: usize) -> usize {
        self.back[k][0][x]
    }

    /// Checks the five simplicial identities wherever both sides exist.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let n_max = self.truncation;
        for n in 0..=n_max {
            let size = self.level_size(n);
            // ∂_i ∂_j = ∂_{j−1} ∂_i  (i < j), on U_n with n ≥ 2
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        for x in 0..size {
                            let lhs = self.faces[n - 1][i][self.faces[n][j][x]];
                            let rhs = self.faces[n - 1][j - 1][self.faces[n][i][x]];
                            report.check(lhs == rhs, || "∂_i∂_j = ∂_{j-1}∂_i (i<j)".into(), n, &[i, j], x);
                        }
                    }
                }
            }
            if n >= n_max {
                continue;
            }
            // faces of degeneracies, on U_n with n < N
            for j in 0..=n {
                for i in 0..=n + 1 {
                    for x in 0..size {
                        let lhs = self.faces[n + 1][i][self.degeneracies[n][j][x]];
                        if i < j {
                            let rhs = self.degeneracies[n - 1][j - 1][self.faces[n][i][x]];
                            report.check(lhs == rhs, || "∂_i s_j = s_{j-1}∂_i (i<j)".into(), n, &[i, j], x);
                        } else if i == j || i == j + 1 {
                            report.check(lhs == x, || "∂_i s_j = id (i=j or i=j+1)".into(), n, &[i, j], x);
                        } else {
                            let rhs = self.degeneracies[n - 1][j][self.faces[n][i - 1][x]];
                            report.check(lhs == rhs, || "∂_i s_j = s_j∂_{i-1} (i>j+1)".into(), n, &[i, j], x);
                        }
                    }
                }
            }
            // s_i s_j = s_{j+1} s_i  (i ≤ j), needs level n + 2
            if n + 2 <= n_max {
                for j in 0..=n {
                    for i in 0..=j {
                        for x in 0..size {
                            let lhs = self.degeneracies[n + 1][i][self.degeneracies[n][j][x]];
                            let rhs = self.degeneracies[n + 1][j + 1][self.degeneracies[n][i][x]];
                            report.check(lhs == rhs, || "s_i s_j = s_{j+1} s_i (i<=j)".into(), n, &[i, j], x);
                        }
                    }
                }
            }
        }
        report
    }

    /// Applies face maps right to left starting at level `k`, without the
    /// precomputed composite tables.
    fn apply_faces(&self, mut level: usize, mut x: usize, faces_right_to_left: &[usize]) -> usize {
        for &i in faces_right_to_left {
            x = self.faces[level][i][x];
            level -= 1;
        }
        x
    }

    fn rho_direct(&self, k: usize, p: usize, x: usize) -> usize {
        let seq: Vec<usize> = (p + 1..=k).rev().collect();
        self.apply_faces(k, x, &seq)
    }

    fn tau_direct(&self, k: usize, p: usize, x: usize) -> usize {
        self.apply_faces(k, x, &vec![0; k - p])
    }

    /// Checks the front/back face composite identities exhaustively:
    /// `ρ_{p,r}ρ_{k,p} = ρ_{k,r}`, `τ_{p,r}τ_{k,p} = τ_{k,r}` and
    /// `ρ_{p,r}τ_{k,p} = τ_{k+r−p,r}ρ_{k,k+r−p}`. Both sides are computed
    /// from the raw face maps.
    pub fn validate_face_composites(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for k in 0..=self.truncation {
            for p in 0..=k {
                for r in 0..=p {
                    for x in 0..self.level_size(k) {
                        let a = self.rho_direct(p, r, self.rho_direct(k, p, x));
                        let b = self.rho_direct(k, r, x);
                        report.check(a == b, || "ρ_{p,r}ρ_{k,p} = ρ_{k,r}".into(), k, &[p, r], x);
                        let a = self.tau_direct(p, r, self.tau_direct(k, p, x));
                        let b = self.tau_direct(k, r, x);
                        report.check(a == b, || "τ_{p,r}τ_{k,p} = τ_{k,r}".into(), k, &[p, r], x);
                        let m = k + r - p;
                        let a = self.rho_direct(p, r, self.tau_direct(k, p, x));
                        let b = self.tau_direct(m, r, self.rho_direct(k, m, x));
                        report.check(
                            a == b,
                            || "ρ_{p,r}τ_{k,p} = τ_{k+r-p,r}ρ_{k,k+r-p}".into(),
                            k,
                            &[p, r],
                            x,
                        );
                        report.check(
                            self.rho(k, r, x) == self.rho_direct(k, r, x)
                                && self.tau(k, r, x) == self.tau_direct(k, r, x),
                            || "face composite table matches face maps".into(),
                            k,
                            &[r],
                            x,
                        );
                    }
                }
            }
        }
        report
    }

    /// Copy of this space with one face entry replaced; used by mutation tests.
    pub fn with_face_entry(&self, n: usize, i: usize, x: usize, value: usize) -> Result<Self> {
        let mut faces = self.faces.clone();
        *faces
            .get_mut(n)
            .and_then(|l| l.get_mut(i))
            .and_then(|op| op.get_mut(x))
            .ok_or_else(|| Error::structural("face entry out of range"))? = value;
        SimplicialSpace::new(self.truncation, self.ids.clone(), faces, self.degeneracies.clone())
    }
}

fn check_index_array(op: &[usize], domain: usize, codomain: usize, what: impl Fn() -> String) -> Result<()> {
    if op.len() != domain {
        return Err(Error::structural(format!(
            "{} has {} entries, domain has {domain}",
            what(),
            op.len()
        )));
    }
    if let Some(&bad) = op.iter().find(|&&v| v >= codomain) {
        return Err(Error::structural(format!(
            "{} maps to index {bad}, codomain has {codomain}",
            what()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_space_passes() {
        let s = SimplicialSpace::point(3);
        assert!(s.validate().passed());
        assert!(s.validate_face_composites().passed());
        assert_eq!(s.front_face(2, 2).unwrap(), &[0]);
    }

    #[test]
    fn face_range_errors() {
        let s = SimplicialSpace::point(2);
        assert!(matches!(s.front_face(1, 2), Err(Error::Structural(_))));
        assert!(matches!(s.back_face(3, 1), Err(Error::Truncation(_))));
    }

    #[test]
    fn bad_shapes_are_structural() {
        let ids = vec![vec!["a".to_string()], vec!["b".to_string()]];
        let faces = vec![vec![], vec![vec![0]]];
        let degs = vec![vec![vec![0]]];
        assert!(SimplicialSpace::new(1, ids, faces, degs).is_err());
    }
}
