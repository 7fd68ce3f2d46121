use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{EngineError, Family, Tuple};

impl Family {
    /// The subalgebra of the product generated by `generators`.
    ///
    /// A symbol whose models split into classes `C_0..C_q` by projection
    /// position maps arguments to the tuple that agrees with argument `j` on
    /// `C_j`. The fixpoint therefore only has to glue restrictions of known
    /// elements along each symbol's classes; symbols with a single class
    /// create nothing.
    pub fn subalgebra_closure(&self, generators: &[Tuple]) -> Result<BTreeSet<Tuple>, EngineError> {
        self.closure_within(generators, usize::MAX)
    }

    /// As [`Family::subalgebra_closure`], failing once more than `limit`
    /// elements have been produced.
    pub fn closure_within(&self, generators: &[Tuple], limit: usize) -> Result<BTreeSet<Tuple>, EngineError> {
        self.check_tuples(generators)?;
        let mut closure: BTreeSet<Tuple> = generators.iter().cloned().collect();
        if closure.len() > limit {
            return Err(EngineError::ClosureTooLarge { limit });
        }
        let mixing: Vec<_> = self
            .actions()
            .iter()
            .filter(|action| action.classes.len() > 1)
            .collect();
        loop {
            let mut pending: BTreeSet<Tuple> = BTreeSet::new();
            for action in &mixing {
                let restrictions: Vec<Vec<Vec<usize>>> = action
                    .classes
                    .iter()
                    .map(|(_, members)| {
                        let distinct: BTreeSet<Vec<usize>> = closure
                            .iter()
                            .map(|t| members.iter().map(|&i| t.0[i]).collect())
                            .collect();
                        distinct.into_iter().collect()
                    })
                    .collect();
                if restrictions.iter().any(Vec::is_empty) {
                    continue;
                }
                // Odometer over one restriction per class.
                let mut choice = vec![0usize; restrictions.len()];
                'product: loop {
                    let mut coords = vec![0usize; self.len()];
                    for ((_, members), (options, &pick)) in
                        action.classes.iter().zip(restrictions.iter().zip(&choice))
                    {
                        for (&model, &value) in members.iter().zip(&options[pick]) {
                            coords[model] = value;
                        }
                    }
                    let tuple = Tuple(coords);
                    if !closure.contains(&tuple)
                        && pending.insert(tuple)
                        && closure.len() + pending.len() > limit
                    {
                        return Err(EngineError::ClosureTooLarge { limit });
                    }
                    for slot in (0..choice.len()).rev() {
                        choice[slot] += 1;
                        if choice[slot] < restrictions[slot].len() {
                            continue 'product;
                        }
                        choice[slot] = 0;
                    }
                    break;
                }
            }
            if pending.is_empty() {
                return Ok(closure);
            }
            closure.append(&mut pending);
        }
    }

    /// Whether `element` lies in the subalgebra generated by `generators`.
    pub fn membership_closure(&self, generators: &[Tuple], element: &Tuple) -> Result<bool, EngineError> {
        self.check_tuple(element)?;
        self.check_tuples(generators)?;
        // Projections never produce a coordinate value no generator has.
        if !self.coordinates_covered(generators, element) {
            return Ok(false);
        }
        Ok(self.subalgebra_closure(generators)?.contains(element))
    }

    /// Coordinates in which `element` takes a value that no generator takes.
    pub fn uncovered_coordinates(&self, generators: &[Tuple], element: &Tuple) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| generators.iter().all(|g| g.0[i] != element.0[i]))
            .collect()
    }

    fn coordinates_covered(&self, generators: &[Tuple], element: &Tuple) -> bool {
        self.uncovered_coordinates(generators, element).is_empty()
    }
}
