//! Per-degree exact linear algebra on a [`Dga`]: the splitting
//! image(d) ⊕ C ⊕ I of each graded piece, the section δ of the differential,
//! cohomology bases, class arithmetic and exactness tests.
//!
//! The splitting is chosen deterministically. In degree k, eliminate the
//! matrix of d : A^k → A^{k+1} left to right; the pivot columns name the
//! monomials spanning I^k (a complement of the kernel), the kernel basis
//! comes from the free columns, and image(d)^k = d(I^{k-1}) with δ sending
//! each d(e_j) back to its pivot monomial e_j. C^k is then filled up from the
//! kernel basis vectors that are independent of the image, in order. The same
//! entries reappear verbatim after extension of scalars, because elimination
//! over the extension performs the identical pivots on embedded entries.

use std::sync::Arc;

use crate::error::MasseyError;
use crate::field::FieldElement;
use crate::gca::{Dga, Element};
use crate::linalg::{Matrix, SpanBuilder};

/// The decomposition A^k = image(d) ⊕ C ⊕ I for one degree, with the inverse
/// δ of d on its image.
pub struct Splitting {
    degree: u32,
    dim: usize,
    /// coordinate vectors (in the monomial basis of this degree) of the bases
    im: Vec<Vec<FieldElement>>,
    c: Vec<Vec<FieldElement>>,
    i: Vec<Vec<FieldElement>>,
    /// inverse of the basis-change matrix [im | c | i]
    minv: Option<Matrix>,
    /// for each image basis vector u_t = d(e_{j_t}), the source monomial
    /// index j_t in degree k-1
    delta_source: Vec<usize>,
}

/// Components of a homogeneous element along the splitting of its degree.
pub struct Decomposition {
    pub im: Vec<FieldElement>,
    pub c: Vec<FieldElement>,
    pub i: Vec<FieldElement>,
}

impl Splitting {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_image(&self) -> usize {
        self.im.len()
    }

    pub fn dim_cohomology(&self) -> usize {
        self.c.len()
    }

    pub fn dim_complement(&self) -> usize {
        self.i.len()
    }

    pub fn image_vector(&self, t: usize) -> &[FieldElement] {
        &self.im[t]
    }

    pub fn cohomology_vector(&self, t: usize) -> &[FieldElement] {
        &self.c[t]
    }

    pub fn complement_vector(&self, t: usize) -> &[FieldElement] {
        &self.i[t]
    }

    /// Splits a vector of polynomial coordinates into (image, C, I)
    /// coordinate polynomials; the change of basis is over the field, so
    /// this is a field-linear map applied entrywise.
    pub fn decompose_polys(
        &self,
        coords: &[crate::poly::Poly],
    ) -> (Vec<crate::poly::Poly>, Vec<crate::poly::Poly>, Vec<crate::poly::Poly>) {
        let Some(minv) = &self.minv else {
            return (Vec::new(), Vec::new(), Vec::new());
        };
        let mixed = crate::poly::matrix_apply_polys(minv, coords);
        let (nim, nc) = (self.im.len(), self.c.len());
        let mut it = mixed.into_iter();
        let im: Vec<_> = it.by_ref().take(nim).collect();
        let c: Vec<_> = it.by_ref().take(nc).collect();
        let i: Vec<_> = it.collect();
        (im, c, i)
    }

    /// Splits a coordinate vector of this degree into its (image, C, I)
    /// coordinates with respect to the chosen bases.
    pub fn decompose(&self, coords: &[FieldElement]) -> Decomposition {
        assert_eq!(coords.len(), self.dim);
        let Some(minv) = &self.minv else {
            return Decomposition {
                im: Vec::new(),
                c: Vec::new(),
                i: Vec::new(),
            };
        };
        let mixed = minv.mul_vec(coords);
        let (nim, nc) = (self.im.len(), self.c.len());
        Decomposition {
            im: mixed[..nim].to_vec(),
            c: mixed[nim..nim + nc].to_vec(),
            i: mixed[nim + nc..].to_vec(),
        }
    }
}

/// A cohomology class, stored as coordinates in the C-basis of its degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyClass {
    pub degree: u32,
    pub coords: Vec<FieldElement>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl Dga {
    /// The deterministic splitting of the graded piece in `degree`; cached.
    pub fn splitting(&self, degree: u32) -> Arc<Splitting> {
        if let Some(s) = self.splitting_cache.lock().unwrap().get(&degree) {
            return Arc::clone(s);
        }
        let computed = Arc::new(self.compute_splitting(degree));
        let mut cache = self.splitting_cache.lock().unwrap();
        Arc::clone(cache.entry(degree).or_insert(computed))
    }

    fn diff_matrix(&self, degree: u32) -> Matrix {
        let source = self.basis(degree);
        let target_dim = self.dim(degree + 1);
        let desc = self.descriptor();
        let mut m = Matrix::zero(target_dim, source.dim(), desc);
        for (j, mono) in source.monomials.iter().enumerate() {
            let image = self.differential(&self.monomial_element(mono.clone()));
            if image.is_zero() {
                continue;
            }
            let coords = self
                .coords(&image, degree + 1)
                .expect("differential raises degree by one");
            for (r, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    *m.at_mut(r, j) = v;
                }
            }
        }
        m
    }

    fn compute_splitting(&self, degree: u32) -> Splitting {
        let desc = self.descriptor();
        let dim = self.dim(degree);
        if dim == 0 {
            return Splitting {
                degree,
                dim,
                im: Vec::new(),
                c: Vec::new(),
                i: Vec::new(),
                minv: None,
                delta_source: Vec::new(),
            };
        }

        let d_here = self.diff_matrix(degree);
        let rref_here = d_here.rref();
        let kernel = d_here.kernel_basis();

        // I^k = span of the pivot monomials of d in this degree
        let i_basis: Vec<Vec<FieldElement>> = rref_here
            .pivots
            .iter()
            .map(|&p| {
                let mut v = vec![desc.zero(); dim];
                v[p] = desc.one();
                v
            })
            .collect();

        // image(d)^k = d(pivot monomials of degree k-1), with δ remembering
        // the source monomial
        let mut im_basis = Vec::new();
        let mut delta_source = Vec::new();
        if degree > 0 {
            let below = self.diff_matrix(degree - 1);
            let rref_below = below.rref();
            for &p in &rref_below.pivots {
                im_basis.push(below.column(p));
                delta_source.push(p);
            }
        }

        // C^k: kernel vectors independent of the image, greedily in order
        let mut span = SpanBuilder::new(dim, desc);
        for u in &im_basis {
            let fresh = span.insert(u);
            debug_assert!(fresh, "image basis must be independent");
        }
        let mut c_basis = Vec::new();
        for v in &kernel {
            if span.insert(v) {
                c_basis.push(v.clone());
            }
        }

        debug_assert_eq!(im_basis.len() + c_basis.len() + i_basis.len(), dim);

        let columns: Vec<Vec<FieldElement>> = im_basis
            .iter()
            .chain(c_basis.iter())
            .chain(i_basis.iter())
            .cloned()
            .collect();
        let m = Matrix::from_columns(dim, &columns, desc);
        let minv = m
            .inverse()
            .expect("splitting bases concatenate to an invertible matrix");

        Splitting {
            degree,
            dim,
            im: im_basis,
            c: c_basis,
            i: i_basis,
            minv: Some(minv),
            delta_source,
        }
    }

    /// δ applied to image-basis coordinates: the canonical primitive in
    /// degree k-1 of the element with those image coordinates in degree k.
    pub fn delta_from_image_coords(
        &self,
        degree: u32,
        im_coords: &[FieldElement],
    ) -> Element {
        let split = self.splitting(degree);
        assert_eq!(im_coords.len(), split.dim_image());
        if degree == 0 {
            return self.zero();
        }
        let below = self.basis(degree - 1);
        self.element_from_terms(
            split
                .delta_source
                .iter()
                .zip(im_coords.iter())
                .map(|(&j, c)| (below.monomials[j].clone(), c.clone())),
        )
    }

    /// Splits a homogeneous element along the splitting of its degree.
    pub fn decompose(&self, x: &Element) -> Result<(u32, Decomposition), MasseyError> {
        self.check_ctx(x)?;
        if x.is_zero() {
            return Err(MasseyError::NotHomogeneous);
        }
        let degree = self.degree_of(x).ok_or(MasseyError::NotHomogeneous)?;
        let coords = self.coords(x, degree)?;
        Ok((degree, self.splitting(degree).decompose(&coords)))
    }

    /// The cohomology class of a closed homogeneous element.
    pub fn class_of(&self, x: &Element) -> Result<CohomologyClass, MasseyError> {
        self.check_ctx(x)?;
        if x.is_zero() {
            return Err(MasseyError::NotHomogeneous);
        }
        let (degree, parts) = self.decompose(x)?;
        if parts.i.iter().any(|c| !c.is_zero()) {
            return Err(MasseyError::NotClosed);
        }
        Ok(CohomologyClass {
            degree,
            coords: parts.c,
        })
    }

    /// The class of a closed element, treating zero as the zero class of the
    /// stated degree.
    pub fn class_of_in_degree(
        &self,
        x: &Element,
        degree: u32,
    ) -> Result<CohomologyClass, MasseyError> {
        if x.is_zero() {
            return Ok(self.zero_class(degree));
        }
        if self.degree_of(x) != Some(degree) {
            return Err(MasseyError::DegreeMismatch(format!(
                "expected a class of degree {degree}"
            )));
        }
        self.class_of(x)
    }

    pub fn zero_class(&self, degree: u32) -> CohomologyClass {
        CohomologyClass {
            degree,
            coords: vec![self.descriptor().zero(); self.cohomology_dim(degree)],
        }
    }

    pub fn cohomology_dim(&self, degree: u32) -> usize {
        self.splitting(degree).dim_cohomology()
    }

    /// The classes of the C-basis, i.e. a basis of H^degree.
    pub fn cohomology_basis(&self, degree: u32) -> Vec<CohomologyClass> {
        let n = self.cohomology_dim(degree);
        (0..n)
            .map(|t| {
                let mut coords = vec![self.descriptor().zero(); n];
                coords[t] = self.descriptor().one();
                CohomologyClass { degree, coords }
            })
            .collect()
    }

    /// The canonical representative: the C-basis combination with the class's
    /// coordinates.
    pub fn representative(&self, class: &CohomologyClass) -> Element {
        let split = self.splitting(class.degree);
        assert_eq!(class.coords.len(), split.dim_cohomology());
        let basis = self.basis(class.degree);
        let desc = self.descriptor();
        let mut coords = vec![desc.zero(); split.dim()];
        for (t, c) in class.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, v) in split.cohomology_vector(t).iter().enumerate() {
                if !v.is_zero() {
                    coords[k] = &coords[k] + &(c * v);
                }
            }
        }
        self.element_from_terms(
            basis
                .monomials
                .iter()
                .zip(coords)
                .map(|(m, c)| (m.clone(), c)),
        )
    }

    /// True iff the element is a boundary (its C and I components vanish).
    pub fn is_exact(&self, x: &Element) -> Result<bool, MasseyError> {
        if x.is_zero() {
            return Ok(true);
        }
        let (_, parts) = self.decompose(x)?;
        Ok(parts.c.iter().all(|c| c.is_zero()) && parts.i.iter().all(|c| c.is_zero()))
    }

    /// The canonical primitive δ(x) of an exact element.
    pub fn primitive(&self, x: &Element) -> Result<Element, MasseyError> {
        if x.is_zero() {
            return Ok(self.zero());
        }
        let (degree, parts) = self.decompose(x)?;
        if parts.c.iter().any(|c| !c.is_zero()) || parts.i.iter().any(|c| !c.is_zero()) {
            return Err(MasseyError::NotExact);
        }
        Ok(self.delta_from_image_coords(degree, &parts.im))
    }

    /// Cup product of cohomology classes via canonical representatives.
    pub fn cup(
        &self,
        a: &CohomologyClass,
        b: &CohomologyClass,
    ) -> Result<CohomologyClass, MasseyError> {
        let prod = self.mul(&self.representative(a), &self.representative(b))?;
        self.class_of_in_degree(&prod, a.degree + b.degree)
    }

    /// Matrix of cup-by-`a` from H^degree to H^{degree + |a|}, columns indexed
    /// by the cohomology basis of `degree`.
    pub fn cup_matrix(&self, a: &CohomologyClass, degree: u32) -> Result<Matrix, MasseyError> {
        let basis = self.cohomology_basis(degree);
        let target_dim = self.cohomology_dim(degree + a.degree);
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            cols.push(self.cup(a, b)?.coords);
        }
        Ok(Matrix::from_columns(target_dim, &cols, self.descriptor()))
    }

    /// True iff H^0 is one-dimensional and spanned by the unit.
    pub fn is_connected(&self) -> bool {
        if self.cohomology_dim(0) != 1 {
            return false;
        }
        match self.class_of(&self.one()) {
            Ok(c) => !c.is_zero(),
            Err(_) => false,
        }
    }
}
