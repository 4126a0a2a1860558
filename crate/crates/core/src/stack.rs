//! Layered geometry along z.

use crate::config::{self, LayerDoc, StackDoc};
use crate::error::{Error, Result};
use crate::herglotz::MaterialSpec;
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub thickness: f64,
    pub material: MaterialSpec,
}

impl Layer {
    pub fn new(thickness: f64, material: MaterialSpec) -> Result<Self> {
        if !(thickness > 0.0) || !thickness.is_finite() {
            return Err(Error::Geometry(format!(
                "layer thickness must be positive, got {thickness}"
            )));
        }
        Ok(Self {
            thickness,
            material,
        })
    }
}

/// Ordered layers stacked along increasing z starting at `z_min`.
///
/// Layers sharing a material label form one phase; phases are numbered in
/// order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct StackSpec {
    z_min: f64,
    c: f64,
    layers: Vec<Layer>,
    /// Interface positions, `layers.len() + 1` entries.
    boundaries: Vec<f64>,
    phase_of_layer: Vec<usize>,
}

/// Per-phase tensors (ωε_p, ωμ_p); the tuple Z on which Λ depends.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorTuple {
    pub eps: Vec<CMatrix>,
    pub mu: Vec<CMatrix>,
}

impl TensorTuple {
    pub fn phase_count(&self) -> usize {
        self.eps.len()
    }

    /// Flat view in the order (ωε_1, …, ωε_N, ωμ_1, …, ωμ_N).
    pub fn components(&self) -> Vec<&CMatrix> {
        self.eps.iter().chain(self.mu.iter()).collect()
    }

    pub fn from_components(mut components: Vec<CMatrix>) -> Result<Self> {
        if components.is_empty() || !components.len().is_multiple_of(2) {
            return Err(Error::dimension(format!(
                "tensor tuple needs an even, nonzero number of components, got {}",
                components.len()
            )));
        }
        let mu = components.split_off(components.len() / 2);
        Ok(Self {
            eps: components,
            mu,
        })
    }

    pub fn component_mut(&mut self, index: usize) -> Option<&mut CMatrix> {
        let n = self.eps.len();
        if index < n {
            self.eps.get_mut(index)
        } else {
            self.mu.get_mut(index - n)
        }
    }
}

impl StackSpec {
    pub fn new(z_min: f64, layers: Vec<Layer>, c: f64) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Geometry("a stack needs at least one layer".into()));
        }
        if !z_min.is_finite() {
            return Err(Error::Geometry("z_min must be finite".into()));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Geometry(format!("c must be positive, got {c}")));
        }
        let mut boundaries = Vec::with_capacity(layers.len() + 1);
        let mut z = z_min;
        boundaries.push(z);
        for layer in &layers {
            if !(layer.thickness > 0.0) {
                return Err(Error::Geometry(format!(
                    "layer thickness must be positive, got {}",
                    layer.thickness
                )));
            }
            z += layer.thickness;
            boundaries.push(z);
        }
        let mut phase_materials: Vec<&MaterialSpec> = Vec::new();
        let mut phase_of_layer = Vec::with_capacity(layers.len());
        for (i, layer) in layers.iter().enumerate() {
            match phase_materials
                .iter()
                .position(|m| m.label == layer.material.label)
            {
                Some(p) if *phase_materials[p] == layer.material => phase_of_layer.push(p),
                Some(_) => {
                    return Err(Error::Geometry(format!(
                        "layer {i} reuses label `{}` with a different material",
                        layer.material.label
                    )))
                }
                None => {
                    phase_of_layer.push(phase_materials.len());
                    phase_materials.push(&layer.material);
                }
            }
        }
        Ok(Self {
            z_min,
            c,
            layers,
            boundaries,
            phase_of_layer,
        })
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn z_max(&self) -> f64 {
        *self.boundaries.last().expect("nonempty")
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Interface positions z_min = b₀ < b₁ < … < b_n = z_max.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn phase_of_layer(&self, layer: usize) -> usize {
        self.phase_of_layer[layer]
    }

    pub fn phase_count(&self) -> usize {
        self.phase_of_layer.iter().max().map_or(0, |p| p + 1)
    }

    /// Material of each phase, in phase order.
    pub fn phase_materials(&self) -> Vec<&MaterialSpec> {
        let mut out: Vec<&MaterialSpec> = Vec::new();
        for (layer, &p) in self.layers.iter().zip(&self.phase_of_layer) {
            if p == out.len() {
                out.push(&layer.material);
            }
        }
        out
    }

    /// Per-phase tensors at ω (analytic continuation; no half-plane check).
    pub fn tensors_at(&self, omega: C64) -> Result<TensorTuple> {
        let mut eps = Vec::new();
        let mut mu = Vec::new();
        for mat in self.phase_materials() {
            let (e, m) = mat.tensors_at(omega)?;
            eps.push(e);
            mu.push(m);
        }
        Ok(TensorTuple { eps, mu })
    }

    fn slack(&self) -> f64 {
        1e-12 * (self.z_max() - self.z_min).abs().max(self.z_min.abs()).max(1.0)
    }

    /// Clamps `z` into Ω, or fails if it lies outside by more than rounding slack.
    pub fn clamp_into(&self, z: f64) -> Result<f64> {
        let slack = self.slack();
        if !z.is_finite() || z < self.z_min - slack || z > self.z_max() + slack {
            return Err(Error::domain(format!(
                "z = {z} lies outside [{}, {}]",
                self.z_min,
                self.z_max()
            )));
        }
        Ok(z.clamp(self.z_min, self.z_max()))
    }

    /// Layer index and offset of `z`. Interface points belong to the layer on
    /// their left, except `z_min`, which belongs to layer 0.
    pub fn locate(&self, z: f64) -> Result<(usize, f64)> {
        let z = self.clamp_into(z)?;
        let n = self.layers.len();
        let idx = (0..n)
            .find(|&j| z <= self.boundaries[j + 1])
            .unwrap_or(n - 1);
        Ok((idx, z - self.boundaries[idx]))
    }

    pub fn to_document(&self) -> StackDoc {
        StackDoc {
            c: self.c,
            z_min: self.z_min,
            layers: self
                .layers
                .iter()
                .map(|l| LayerDoc {
                    thickness: l.thickness,
                    material: config::material_to_doc(&l.material),
                })
                .collect(),
        }
    }
}

/// Three-layer sandwich on [−d, d]: mat1 | mat2 on [−d₂, d₂] | mat1.
pub fn make_sandwich(d: f64, d2: f64, mat1: MaterialSpec, mat2: MaterialSpec, c: f64) -> Result<StackSpec> {
    if !(d2 > 0.0 && d2 < d) {
        return Err(Error::Geometry(format!(
            "sandwich needs 0 < d2 < d, got d = {d}, d2 = {d2}"
        )));
    }
    let shell = d - d2;
    StackSpec::new(
        -d,
        vec![
            Layer::new(shell, mat1.clone())?,
            Layer::new(2.0 * d2, mat2)?,
            Layer::new(shell, mat1)?,
        ],
        c,
    )
}

/// Piecewise-constant approximation of a graded medium on [z_min, z_max].
///
/// `profile(z)` is sampled at the midpoint of each of `cells` equal cells.
/// Each cell becomes its own phase, labelled `"{label}#{k}"`.
pub fn from_profile<F>(z_min: f64, z_max: f64, cells: usize, c: f64, profile: F) -> Result<StackSpec>
where
    F: Fn(f64) -> MaterialSpec,
{
    if cells == 0 || !(z_max > z_min) {
        return Err(Error::Geometry(format!(
            "profile needs z_min < z_max and at least one cell, got [{z_min}, {z_max}] with {cells} cells"
        )));
    }
    let h = (z_max - z_min) / cells as f64;
    let layers = (0..cells)
        .map(|k| {
            let mut m = profile(z_min + (k as f64 + 0.5) * h);
            m.label = format!("{}#{k}", m.label);
            Layer::new(h, m)
        })
        .collect::<Result<Vec<_>>>()?;
    StackSpec::new(z_min, layers, c)
}

/// Builds a stack from a parsed [`StackDoc`].
pub fn stack_from_doc(doc: &StackDoc) -> Result<StackSpec> {
    if !(doc.c > 0.0) || !doc.c.is_finite() {
        return Err(Error::parse("c", "must be positive"));
    }
    if !doc.z_min.is_finite() {
        return Err(Error::parse("z_min", "must be finite"));
    }
    if doc.layers.is_empty() {
        return Err(Error::parse("layers", "at least one layer is required"));
    }
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (i, l) in doc.layers.iter().enumerate() {
        if !(l.thickness > 0.0) || !l.thickness.is_finite() {
            return Err(Error::parse(
                format!("layers[{i}].thickness"),
                format!("must be positive, got {}", l.thickness),
            ));
        }
        let material = config::material_from_doc(&l.material, &format!("layers[{i}].material"))?;
        layers.push(Layer {
            thickness: l.thickness,
            material,
        });
    }
    StackSpec::new(doc.z_min, layers, doc.c).map_err(|e| Error::parse("layers", e.to_string()))
}

/// Parses a stack configuration document.
pub fn parse_stack(doc: &serde_json::Value) -> Result<StackSpec> {
    stack_from_doc(&config::from_value(doc)?)
}
