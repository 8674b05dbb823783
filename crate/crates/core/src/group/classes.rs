use super::{ElementId, PGroup};

/// Conjugacy classes ordered by their minimal-index representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyPartition {
    classes: Vec<Vec<ElementId>>,
    class_of: Vec<usize>,
}

impl ConjugacyPartition {
    pub(super) fn empty() -> Self {
        ConjugacyPartition { classes: vec![], class_of: vec![] }
    }

    pub(super) fn compute(group: &PGroup) -> Self {
        let n = group.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in group.elements() {
            if class_of[g.index()] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut class: Vec<ElementId> = group.elements().map(|h| group.conjugate(g, h)).collect();
            class.sort();
            class.dedup();
            for &c in &class {
                class_of[c.index()] = idx;
            }
            classes.push(class);
        }
        ConjugacyPartition { classes, class_of }
    }

    pub fn classes(&self) -> &[Vec<ElementId>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Minimal-index element of each class.
    pub fn representatives(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.classes.iter().map(|c| c[0])
    }

    pub fn class_index(&self, g: ElementId) -> usize {
        self.class_of[g.index()]
    }

    pub fn class_of(&self, g: ElementId) -> &[ElementId] {
        &self.classes[self.class_of[g.index()]]
    }

    /// Classes with at least two elements, in representative order.
    pub fn noncentral(&self) -> impl Iterator<Item = &[ElementId]> + '_ {
        self.classes.iter().filter(|c| c.len() > 1).map(|c| c.as_slice())
    }

    /// Number of non-singleton classes.
    pub fn t(&self) -> usize {
        self.noncentral().count()
    }
}
