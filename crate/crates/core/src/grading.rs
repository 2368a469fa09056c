//! Graduations of finite abelian groups and the partial structures they
//! induce.
//!
//! A graduation expresses a group as an internal direct sum of nontrivial
//! subgroups (the strict components), together with a distinguished zero
//! grade carrying `{0}`. The union of the components is the homogeneous
//! part: it carries a partial addition, defined exactly inside components,
//! and is axiomatized abstractly as a homogroupoid. Linearization rebuilds
//! a graded group from a homogroupoid, recovering the original up to weak
//! equivalence.
//!
//! Everything here is additive and abelian; the commutation condition of
//! the homogeneous-part characterization is therefore vacuous and reported
//! as passing.

use crate::error::{Error, Result};
use crate::finabel::{
    closure_under_addition, enumerate_subgroups_cayley, FiniteAbelianGroup, Subgroup,
};
use crate::report::CheckReport;
use crate::set::ElemSet;

/// A grade. `Grade(0)` is the zero grade; strict grades are `1..`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade(pub u16);

impl Grade {
    pub const ZERO: Grade = Grade(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A proper graduation: strict components forming an internal direct sum,
/// plus the implicit zero grade mapped to `{0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graduation {
    group: FiniteAbelianGroup,
    components: Vec<Subgroup>,
}

impl Graduation {
    /// Builds a graduation from its strict components. The components are
    /// canonically sorted, so grade ids are deterministic.
    pub fn new(group: FiniteAbelianGroup, mut components: Vec<Subgroup>) -> Result<Self> {
        for c in &components {
            if c.len() < 2 {
                return Err(Error::Structural(
                    "strict components must have at least 2 elements".into(),
                ));
            }
            if c.member_set.universe() != group.element_count() {
                return Err(Error::Structural(
                    "component indexed over a different group".into(),
                ));
            }
        }
        if !group.is_internal_direct_sum(&components) {
            return Err(Error::Structural(
                "components do not form an internal direct sum".into(),
            ));
        }
        components.sort();
        Ok(Graduation { group, components })
    }

    /// The one-component graduation (the whole group), or no components
    /// for the trivial group.
    pub fn trivial(group: FiniteAbelianGroup) -> Self {
        let components = if group.element_count() == 1 {
            Vec::new()
        } else {
            vec![Subgroup {
                member_set: ElemSet::full(group.element_count()),
            }]
        };
        Graduation { group, components }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn components(&self) -> &[Subgroup] {
        &self.components
    }

    pub fn strict_grade_count(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, g: Grade) -> Option<&Subgroup> {
        if g.is_zero() {
            None
        } else {
            self.components.get(g.0 as usize - 1)
        }
    }

    /// Same strict component sets.
    pub fn weakly_equivalent(&self, other: &Graduation) -> bool {
        self.group == other.group && self.components == other.components
    }
}

/// The union of a graduation's components, with the grade of each element.
#[derive(Debug, Clone)]
pub struct HomogeneousPart {
    pub carrier: ElemSet,
    /// Per element id: `Some(grade)` for homogeneous elements (zero grade
    /// for 0), `None` for nonhomogeneous ones.
    pub grade_of: Vec<Option<Grade>>,
}

/// Carrier of the homogeneous part together with its grades.
pub fn homogeneous_part(g: &Graduation) -> HomogeneousPart {
    let n = g.group().element_count();
    let mut carrier = ElemSet::singleton(n, 0);
    let mut grade_of = vec![None; n];
    grade_of[0] = Some(Grade::ZERO);
    for (i, comp) in g.components().iter().enumerate() {
        for x in comp.member_set.iter() {
            carrier.insert(x);
            if x != 0 {
                grade_of[x] = Some(Grade(i as u16 + 1));
            }
        }
    }
    HomogeneousPart { carrier, grade_of }
}

/// Reconstructs the graduation whose homogeneous part is `h`: components
/// are the sets `{x in H : a + x in H}`. Fails when `h` is not a
/// homogeneous part.
pub fn graduation_from_homogeneous_part(
    group: &FiniteAbelianGroup,
    h: &ElemSet,
) -> Result<Graduation> {
    let mut components: Vec<Subgroup> = Vec::new();
    let mut assigned = ElemSet::empty(group.element_count());
    for a in h.iter().filter(|&a| a != 0) {
        if assigned.contains(a) {
            continue;
        }
        let class: Vec<usize> = h
            .iter()
            .filter(|&x| x != 0 && h.contains(group.add_ids(a, x)))
            .collect();
        if !class.contains(&a) {
            return Err(Error::Structural(format!(
                "{} is not in its own addibility class",
                group.label(a)
            )));
        }
        let mut member_set = ElemSet::singleton(group.element_count(), 0);
        for &x in &class {
            member_set.insert(x);
            assigned.insert(x);
        }
        let sub = Subgroup { member_set };
        // Must itself be a subgroup.
        let regen = group.subgroup_from_ids(&class);
        if regen != sub {
            return Err(Error::Structural(format!(
                "addibility class of {} is not a subgroup",
                group.label(a)
            )));
        }
        components.push(sub);
    }
    Graduation::new(group.clone(), components)
}

/// A finite partial structure: carrier `0..n` with 0 the zero element, a
/// symmetric addibility relation and a partial sum stored separately so
/// that malformed inputs (sum undefined on an addible pair) are
/// representable and reportable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homogroupoid {
    n: usize,
    addible: Vec<bool>,
    sum: Vec<Option<u16>>,
}

impl Homogroupoid {
    pub fn from_tables(n: usize, addible: Vec<bool>, sum: Vec<Option<u16>>) -> Result<Self> {
        if addible.len() != n * n || sum.len() != n * n {
            return Err(Error::Structural("addibility/sum tables must be n*n".into()));
        }
        if n == 0 {
            return Err(Error::Structural("carrier must contain 0".into()));
        }
        Ok(Homogroupoid { n, addible, sum })
    }

    /// The homogeneous part of a graduation as an abstract homogroupoid.
    /// Carrier ids are assigned in ascending group-element-id order, so the
    /// zero element keeps id 0. Returns the structure and the map from
    /// homogroupoid ids to group element ids.
    pub fn from_homogeneous_part(
        group: &FiniteAbelianGroup,
        hp: &HomogeneousPart,
    ) -> (Self, Vec<usize>) {
        let to_group: Vec<usize> = hp.carrier.to_vec();
        let n = to_group.len();
        let mut of_group = vec![usize::MAX; group.element_count()];
        for (i, &g) in to_group.iter().enumerate() {
            of_group[g] = i;
        }
        let mut addible = vec![false; n * n];
        let mut sum = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = group.add_ids(to_group[i], to_group[j]);
                let in_h = hp.carrier.contains(s);
                // Inside one component, or one side zero.
                let ok = in_h
                    && (i == 0
                        || j == 0
                        || hp.grade_of[to_group[i]] == hp.grade_of[to_group[j]]);
                if ok {
                    addible[i * n + j] = true;
                    sum[i * n + j] = Some(of_group[s] as u16);
                }
            }
        }
        (Homogroupoid { n, addible, sum }, to_group)
    }

    /// A homogroupoid with one cyclic addibility class per entry of
    /// `orders` (each at least 2). Element ids: 0, then class 0's nonzero
    /// elements `1..n_0-1` as multiples of its generator, then class 1's,
    /// and so on.
    pub fn from_cyclic_classes(orders: &[u64]) -> Self {
        let n = 1 + orders.iter().map(|&o| o as usize - 1).sum::<usize>();
        let mut class_of = vec![usize::MAX; n];
        let mut value_of = vec![0usize; n]; // multiple of the class generator
        let mut first = vec![0usize; orders.len()];
        let mut next = 1usize;
        for (ci, &o) in orders.iter().enumerate() {
            first[ci] = next;
            for v in 1..o as usize {
                class_of[next] = ci;
                value_of[next] = v;
                next += 1;
            }
        }
        let mut addible = vec![false; n * n];
        let mut sum = vec![None; n * n];
        for x in 0..n {
            addible[x] = true;
            addible[x * n] = true;
            sum[x] = Some(x as u16);
            sum[x * n] = Some(x as u16);
        }
        for x in 1..n {
            for y in 1..n {
                if class_of[x] == class_of[y] {
                    let ci = class_of[x];
                    let o = orders[ci] as usize;
                    let v = (value_of[x] + value_of[y]) % o;
                    addible[x * n + y] = true;
                    sum[x * n + y] = Some(if v == 0 {
                        0
                    } else {
                        (first[ci] + v - 1) as u16
                    });
                }
            }
        }
        Homogroupoid { n, addible, sum }
    }

    /// A whole abelian group as a homogroupoid (everything addible).
    pub fn total(group: &FiniteAbelianGroup) -> Self {
        let n = group.element_count();
        let mut sum = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                sum[i * n + j] = Some(group.add_ids(i, j) as u16);
            }
        }
        Homogroupoid {
            n,
            addible: vec![true; n * n],
            sum,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn addible(&self, x: usize, y: usize) -> bool {
        self.addible[x * self.n + y]
    }

    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.sum[x * self.n + y].map(|v| v as usize)
    }

    /// The inverse of `x` inside its addibility class, if any.
    pub fn neg(&self, x: usize) -> Option<usize> {
        if x == 0 {
            return Some(0);
        }
        (0..self.n).find(|&y| self.addible(x, y) && self.sum(x, y) == Some(0))
    }

    pub fn sub(&self, x: usize, y: usize) -> Option<usize> {
        let ny = self.neg(y)?;
        if self.addible(x, ny) {
            self.sum(x, ny)
        } else {
            None
        }
    }

    /// Integer multiple `k*x` within the class of `x` (defined for valid
    /// homogroupoids).
    pub fn scale(&self, k: i64, x: usize) -> Option<usize> {
        let mut acc = 0usize;
        let step = if k >= 0 { x } else { self.neg(x)? };
        for _ in 0..k.unsigned_abs() {
            acc = self.sum(acc, step)?;
        }
        Some(acc)
    }

    pub fn order_of(&self, x: usize) -> Option<usize> {
        let mut acc = x;
        let mut k = 1usize;
        while acc != 0 {
            acc = self.sum(acc, x)?;
            k += 1;
            if k > self.n + 1 {
                return None;
            }
        }
        Some(k)
    }

    /// Addibility classes of the nonzero elements, canonically ordered by
    /// least member. Meaningful on structures passing
    /// [`verify_homogroupoid`].
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for a in 1..self.n {
            if seen[a] {
                continue;
            }
            let class: Vec<usize> = (1..self.n).filter(|&x| self.addible(a, x)).collect();
            for &x in &class {
                seen[x] = true;
            }
            out.push(class);
        }
        out
    }

    /// Grade of every element: zero grade for 0, class index + 1 otherwise.
    pub fn grades(&self) -> Vec<Grade> {
        let mut g = vec![Grade::ZERO; self.n];
        for (i, class) in self.classes().iter().enumerate() {
            for &x in class {
                g[x] = Grade(i as u16 + 1);
            }
        }
        g
    }
}

/// A total map between homogroupoid carriers.
#[derive(Debug, Clone)]
pub struct PartialMap {
    pub source: Homogroupoid,
    pub target: Homogroupoid,
    pub value: Vec<u16>,
}

/// Checks the additive homogeneous-part characterization for a subset `H`
/// of a finite abelian group: 0 in H; closure under negation; the
/// addibility transfer condition; the (vacuous) commutation condition; H
/// generates G; and no vanishing sum of pairwise non-addible elements.
/// The overall verdict holds exactly when `H` is the homogeneous part of
/// some graduation of `G`.
pub fn verify_homogeneous_part_axioms(
    group: &FiniteAbelianGroup,
    h: &ElemSet,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("homogeneous-part");
    let members: Vec<usize> = h.to_vec();

    // i) 0 in H.
    report.record(
        "i-zero-element",
        if h.contains(0) {
            None
        } else {
            Some(vec!["0".into()])
        },
    );

    // ii) closure under negation.
    let mut w = None;
    for &x in &members {
        if !h.contains(group.neg_id(x)) {
            w = Some(vec![group.label(x)]);
            break;
        }
    }
    report.record("ii-negation", w);

    // iii) x,y,z,x+y,y+z in H and y != 0 imply x+z in H.
    let mut w = None;
    'outer: for &x in &members {
        for &y in &members {
            if y == 0 {
                continue;
            }
            if !h.contains(group.add_ids(x, y)) {
                continue;
            }
            for &z in &members {
                if h.contains(group.add_ids(y, z)) && !h.contains(group.add_ids(x, z)) {
                    w = Some(vec![group.label(x), group.label(y), group.label(z)]);
                    break 'outer;
                }
            }
        }
    }
    report.record("iii-addibility-transfer", w);

    // iv) commutation condition: vacuous over abelian carriers.
    report.pass("iv-commutation");

    // v) H generates G.
    let span = closure_under_addition(group.element_count(), &members, |a, b| {
        group.add_ids(a, b)
    });
    report.record(
        "v-generates",
        if span.len() == group.element_count() {
            None
        } else {
            Some(vec![format!("span has {} of {} elements", span.len(), group.element_count())])
        },
    );

    // vi) no family of >= 2 pairwise non-addible elements sums to zero.
    let w = vanishing_non_addible_family(group, h)?;
    report.record(
        "vi-no-vanishing-non-addible-sum",
        w.map(|fam| fam.into_iter().map(|x| group.label(x)).collect()),
    );

    Ok(report)
}

/// Searches for `x_1, .., x_n` in `H`, n >= 2, with every pairwise sum
/// (including repeats of one element) outside `H` and total sum zero.
/// Returns the family if one exists.
fn vanishing_non_addible_family(
    group: &FiniteAbelianGroup,
    h: &ElemSet,
) -> Result<Option<Vec<usize>>> {
    let members: Vec<usize> = h.iter().filter(|&x| x != 0).collect();
    if members.len() < 2 && members.iter().all(|&x| group.order_of_id(x) < 3) {
        return Ok(None);
    }

    // Fast exact path: when x ~ y <=> x+y in H is an equivalence relation
    // on H*, a violating family picks at most one element per class and a
    // memoized scan over (class, sum) decides the question.
    if let Some(classes) = addibility_classes_if_equivalence(group, h, &members) {
        return Ok(vanishing_family_over_classes(group, &classes));
    }

    // General case: depth-first search over mutually non-addible multisets.
    let mut budget: u64 = 1 << 24;
    let mut chosen: Vec<usize> = Vec::new();
    let found = dfs_vanishing(group, h, &members, 0, 0, 0, &mut chosen, &mut budget);
    if budget == 0 {
        return Err(Error::Resource(
            "vanishing-sum search budget exhausted".into(),
        ));
    }
    Ok(found)
}

fn addibility_classes_if_equivalence(
    group: &FiniteAbelianGroup,
    h: &ElemSet,
    members: &[usize],
) -> Option<Vec<Vec<usize>>> {
    for &x in members {
        if !h.contains(group.add_ids(x, x)) {
            return None;
        }
    }
    let mut class_of = vec![usize::MAX; group.element_count()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in members {
        if class_of[x] != usize::MAX {
            continue;
        }
        let class: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&y| h.contains(group.add_ids(x, y)))
            .collect();
        let id = classes.len();
        for &y in &class {
            if class_of[y] != usize::MAX {
                return None; // overlapping classes: not an equivalence
            }
            class_of[y] = id;
        }
        classes.push(class);
    }
    // Transitivity within classes: all pairs inside one class addible.
    for class in &classes {
        for &x in class {
            for &y in class {
                if !h.contains(group.add_ids(x, y)) {
                    return None;
                }
            }
        }
    }
    Some(classes)
}

fn vanishing_family_over_classes(
    group: &FiniteAbelianGroup,
    classes: &[Vec<usize>],
) -> Option<Vec<usize>> {
    // reachable[(class_idx, sum, min(count,2))], memoized failure states.
    use std::collections::HashSet;
    let mut dead: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut chosen = Vec::new();
    fn go(
        group: &FiniteAbelianGroup,
        classes: &[Vec<usize>],
        i: usize,
        sum: usize,
        count: usize,
        chosen: &mut Vec<usize>,
        dead: &mut HashSet<(usize, usize, usize)>,
    ) -> bool {
        if i == classes.len() {
            return sum == 0 && count >= 2;
        }
        let key = (i, sum, count.min(2));
        if dead.contains(&key) {
            return false;
        }
        if go(group, classes, i + 1, sum, count, chosen, dead) {
            return true;
        }
        for &x in &classes[i] {
            chosen.push(x);
            if go(
                group,
                classes,
                i + 1,
                group.add_ids(sum, x),
                count + 1,
                chosen,
                dead,
            ) {
                return true;
            }
            chosen.pop();
        }
        dead.insert(key);
        false
    }
    if go(group, classes, 0, 0, 0, &mut chosen, &mut dead) {
        Some(chosen)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_vanishing(
    group: &FiniteAbelianGroup,
    h: &ElemSet,
    members: &[usize],
    from: usize,
    sum: usize,
    count: usize,
    chosen: &mut Vec<usize>,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    if count >= 2 && sum == 0 {
        return Some(chosen.clone());
    }
    for (k, &x) in members.iter().enumerate().skip(from) {
        // x must be non-addible with everything already chosen.
        if chosen.iter().any(|&c| h.contains(group.add_ids(c, x))) {
            continue;
        }
        let self_ok = !h.contains(group.add_ids(x, x));
        let max_mult = if self_ok { group.order_of_id(x) } else { 1 };
        let mut acc = sum;
        for m in 1..=max_mult {
            acc = group.add_ids(acc, x);
            for _ in 0..m {
                chosen.push(x);
            }
            let r = dfs_vanishing(group, h, members, k + 1, acc, count + m, chosen, budget);
            for _ in 0..m {
                chosen.pop();
            }
            if r.is_some() {
                return r;
            }
        }
    }
    None
}

/// Checks the homogroupoid axioms: zero addible with everything and
/// neutral; self-addibility; transfer of addibility through a nonzero
/// middle element; every addibility class an abelian group. Also checks
/// the structural contract that the partial sum is defined exactly on
/// addible pairs and that addibility is symmetric.
pub fn verify_homogroupoid(h: &Homogroupoid) -> CheckReport {
    let mut report = CheckReport::new("homogroupoid");
    let n = h.size();
    let lbl = |x: usize| format!("e{x}");

    let mut w = None;
    'dom: for x in 0..n {
        for y in 0..n {
            if h.addible(x, y) != h.addible(y, x) {
                w = Some(vec![lbl(x), lbl(y), "asymmetric addibility".into()]);
                break 'dom;
            }
            if h.addible(x, y) != h.sum(x, y).is_some() {
                w = Some(vec![lbl(x), lbl(y), "sum domain mismatch".into()]);
                break 'dom;
            }
        }
    }
    report.record("structural-sum-domain", w);

    let mut w = None;
    for x in 0..n {
        if !(h.addible(0, x) && h.addible(x, 0) && h.sum(x, 0) == Some(x) && h.sum(0, x) == Some(x))
        {
            w = Some(vec![lbl(x)]);
            break;
        }
    }
    report.record("i-zero-neutral", w);

    let w = (0..n).find(|&x| !h.addible(x, x)).map(|x| vec![lbl(x)]);
    report.record("ii-self-addible", w);

    let mut w = None;
    'tr: for y in 1..n {
        for x in 0..n {
            if !h.addible(x, y) {
                continue;
            }
            for z in 0..n {
                if h.addible(y, z) && !h.addible(x, z) {
                    w = Some(vec![lbl(x), lbl(y), lbl(z)]);
                    break 'tr;
                }
            }
        }
    }
    report.record("iii-transfer", w);

    // iv) every addibility class H(a), a != 0, is an abelian group.
    let mut w = None;
    'cls: for a in 1..n {
        let class: Vec<usize> = (0..n).filter(|&x| h.addible(a, x)).collect();
        for &x in &class {
            for &y in &class {
                let s = match h.sum(x, y) {
                    Some(s) => s,
                    None => {
                        w = Some(vec![lbl(a), lbl(x), lbl(y), "sum undefined".into()]);
                        break 'cls;
                    }
                };
                if !h.addible(a, s) {
                    w = Some(vec![lbl(a), lbl(x), lbl(y), "not closed".into()]);
                    break 'cls;
                }
                if h.sum(y, x) != Some(s) {
                    w = Some(vec![lbl(a), lbl(x), lbl(y), "not commutative".into()]);
                    break 'cls;
                }
                for &z in &class {
                    let left = h.sum(s, z);
                    let right = h.sum(y, z).and_then(|yz| h.sum(x, yz));
                    if left != right || left.is_none() {
                        w = Some(vec![lbl(a), lbl(x), lbl(y), lbl(z), "not associative".into()]);
                        break 'cls;
                    }
                }
            }
            if !class
                .iter()
                .any(|&y| h.sum(x, y) == Some(0))
            {
                w = Some(vec![lbl(a), lbl(x), "no inverse".into()]);
                break 'cls;
            }
        }
    }
    report.record("iv-classes-are-groups", w);

    report
}

/// A graded group reconstructed from a homogroupoid: the direct sum of its
/// addibility classes, with the embedding of the carrier.
#[derive(Debug, Clone)]
pub struct Linearization {
    pub group: FiniteAbelianGroup,
    pub graduation: Graduation,
    /// Homogroupoid element id -> group element id.
    pub embed: Vec<usize>,
}

/// Expresses a finite abelian group given by a Cayley table as a product
/// of cyclic groups: returns the cyclic orders and each element's
/// coordinate tuple. Deterministic: generators are chosen by maximal
/// order, smallest id first.
pub fn cyclic_decomposition(
    n: usize,
    add: &dyn Fn(usize, usize) -> usize,
) -> (Vec<u64>, Vec<Vec<u64>>) {
    if n == 1 {
        return (Vec::new(), vec![Vec::new()]);
    }
    let order = |x: usize| {
        let mut acc = x;
        let mut k = 1usize;
        while acc != 0 {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let g = (1..n).max_by_key(|&x| (order(x), usize::MAX - x)).unwrap();
    let k = order(g);
    // Cyclic subgroup ⟨g⟩ and the position of each of its elements.
    let mut pow = vec![usize::MAX; n];
    let mut acc = 0usize;
    for i in 0..k {
        pow[acc] = i;
        acc = add(acc, g);
    }
    if k == n {
        let coords = (0..n).map(|x| vec![pow[x] as u64]).collect();
        return (vec![k as u64], coords);
    }
    // Find a complement: a subgroup of size n/k meeting ⟨g⟩ trivially.
    let complement = enumerate_subgroups_cayley(n, add)
        .into_iter()
        .find(|d| {
            d.len() * k == n && d.iter().filter(|&x| pow[x] != usize::MAX).count() == 1
        })
        .expect("a maximal-order cyclic subgroup of a finite abelian group is a direct summand");
    let d_elems: Vec<usize> = complement.to_vec();
    let mut d_index = vec![usize::MAX; n];
    for (i, &x) in d_elems.iter().enumerate() {
        d_index[x] = i;
    }
    let sub_add = |a: usize, b: usize| d_index[add(d_elems[a], d_elems[b])];
    let (sub_orders, sub_coords) = cyclic_decomposition(d_elems.len(), &sub_add);

    let mut orders = vec![k as u64];
    orders.extend(sub_orders);
    // -g = (k-1)*g.
    let mut neg_g = 0usize;
    for _ in 0..k - 1 {
        neg_g = add(neg_g, g);
    }
    let coords = (0..n)
        .map(|x| {
            // Unique split x = a*g + d with d in the complement.
            let mut cur = x;
            for a in 0..k {
                if d_index[cur] != usize::MAX {
                    let mut c = vec![a as u64];
                    c.extend(sub_coords[d_index[cur]].clone());
                    return c;
                }
                cur = add(cur, neg_g);
            }
            unreachable!("element splits across the cyclic summand and its complement");
        })
        .collect();
    (orders, coords)
}

/// Rebuilds the graded group of a homogroupoid: the direct sum of its
/// addibility classes, each re-expressed through its cyclic decomposition.
pub fn linearize(h: &Homogroupoid) -> Result<Linearization> {
    let axioms = verify_homogroupoid(h);
    if !axioms.passed {
        return Err(Error::Structural(format!(
            "homogroupoid axioms fail: {}",
            axioms
                .conditions
                .iter()
                .filter(|c| c.passed == Some(false))
                .map(|c| c.condition_id.clone())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let classes = h.classes();
    // Decompose each class (with 0 adjoined) as a product of cyclic groups.
    let mut all_orders: Vec<u64> = Vec::new();
    let mut class_blocks: Vec<(usize, usize)> = Vec::new(); // (offset, len) into factors
    let mut coords_of: Vec<Vec<u64>> = vec![Vec::new(); h.size()];
    for class in &classes {
        let mut elems = vec![0usize];
        elems.extend(class.iter().copied());
        let mut local = vec![usize::MAX; h.size()];
        for (i, &x) in elems.iter().enumerate() {
            local[x] = i;
        }
        let add = |a: usize, b: usize| local[h.sum(elems[a], elems[b]).expect("class is closed")];
        let (orders, coords) = cyclic_decomposition(elems.len(), &add);
        class_blocks.push((all_orders.len(), orders.len()));
        for (&x, c) in elems.iter().zip(&coords) {
            if x != 0 {
                coords_of[x] = c.clone();
            }
        }
        all_orders.extend(orders);
    }
    let group = if all_orders.is_empty() {
        FiniteAbelianGroup::trivial()
    } else {
        FiniteAbelianGroup::new(all_orders.clone())?
    };
    // Embed carrier elements: class coordinates in their block, zero
    // elsewhere.
    let mut embed = vec![0usize; h.size()];
    let grades = h.grades();
    for x in 1..h.size() {
        let class_idx = grades[x].0 as usize - 1;
        let (off, len) = class_blocks[class_idx];
        let mut residues = vec![0u64; all_orders.len()];
        residues[off..off + len].copy_from_slice(&coords_of[x]);
        embed[x] = group.index_of(&crate::finabel::GroupElement { residues });
    }
    // Components: the subgroup supported on each class block.
    let mut components = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let _ = ci;
        let ids: Vec<usize> = class.iter().map(|&x| embed[x]).collect();
        components.push(group.subgroup_from_ids(&ids));
    }
    let graduation = Graduation::new(group.clone(), components)?;
    Ok(Linearization {
        group,
        graduation,
        embed,
    })
}

/// Verifies that the homogeneous part of the linearization is isomorphic
/// to the homogroupoid via the canonical embedding: bijective onto the
/// carrier, addibility- and sum-preserving.
pub fn roundtrip_check(h: &Homogroupoid) -> Result<bool> {
    let lin = linearize(h)?;
    let hp = homogeneous_part(&lin.graduation);
    let n = h.size();
    if hp.carrier.len() != n {
        return Ok(false);
    }
    let mut image = ElemSet::empty(lin.group.element_count());
    for x in 0..n {
        if !image.insert(lin.embed[x]) || !hp.carrier.contains(lin.embed[x]) {
            return Ok(false);
        }
    }
    for x in 0..n {
        for y in 0..n {
            let s = lin.group.add_ids(lin.embed[x], lin.embed[y]);
            let img_addible = hp.carrier.contains(s)
                && (x == 0
                    || y == 0
                    || hp.grade_of[lin.embed[x]] == hp.grade_of[lin.embed[y]]);
            if h.addible(x, y) != img_addible {
                return Ok(false);
            }
            if let Some(sum) = h.sum(x, y) {
                if lin.embed[sum] != s {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Quasihomomorphism and homomorphism checks for a total map between
/// homogroupoids.
pub fn verify_homomorphism(f: &PartialMap) -> CheckReport {
    let mut report = CheckReport::new("homogroupoid-map");
    let (s, t) = (&f.source, &f.target);
    let v = |x: usize| f.value[x] as usize;
    let lbl = |x: usize| format!("e{x}");

    let mut w = None;
    'q: for x in 0..s.size() {
        for y in 0..s.size() {
            if !s.addible(x, y) {
                continue;
            }
            if !t.addible(v(x), v(y)) {
                w = Some(vec![lbl(x), lbl(y), "images not addible".into()]);
                break 'q;
            }
            if t.sum(v(x), v(y)) != s.sum(x, y).map(v) {
                w = Some(vec![lbl(x), lbl(y), "sum not preserved".into()]);
                break 'q;
            }
        }
    }
    report.record("quasihomomorphism", w);

    let mut w = None;
    'h: for x in 0..s.size() {
        for y in 0..s.size() {
            if v(x) != 0 && v(y) != 0 && t.addible(v(x), v(y)) && !s.addible(x, y) {
                w = Some(vec![lbl(x), lbl(y)]);
                break 'h;
            }
        }
    }
    // A homomorphism is a quasihomomorphism with the reflection condition.
    let quasi_ok = report.condition("quasihomomorphism").unwrap().passed == Some(true);
    match (quasi_ok, w) {
        (true, None) => report.pass("homomorphism"),
        (_, Some(w)) => report.fail("homomorphism", w),
        (false, None) => report.fail("homomorphism", vec!["not a quasihomomorphism".into()]),
    }
    report
}

/// True iff `k` (a subset of the carrier containing 0) is the homogeneous
/// part of a homogeneous subgroup of the linearization: inside every
/// addibility class it cuts out a subgroup.
pub fn is_subhomogroupoid(h: &Homogroupoid, k: &ElemSet) -> bool {
    if !k.contains(0) {
        return false;
    }
    for x in k.iter() {
        if h.neg(x).map(|nx| k.contains(nx)) != Some(true) {
            return false;
        }
        for y in k.iter() {
            if h.addible(x, y) && h.sum(x, y).map(|s| k.contains(s)) != Some(true) {
                return false;
            }
        }
    }
    true
}

/// The factor homogroupoid of `h` by a subhomogroupoid `k`: elements are
/// the nonzero cosets of `K(a)` inside each addibility class, plus a
/// shared zero. Returns the structure and the projection map.
pub fn factor_homogroupoid(h: &Homogroupoid, k: &ElemSet) -> Result<(Homogroupoid, Vec<usize>)> {
    if !is_subhomogroupoid(h, k) {
        return Err(Error::Structural(
            "subset is not a subhomogroupoid (some class section is not a subgroup)".into(),
        ));
    }
    let n = h.size();
    let mut proj = vec![usize::MAX; n];
    proj[0] = 0;
    let mut coset_reprs: Vec<usize> = vec![0]; // factor id -> representative
    for class in h.classes() {
        // Cosets within this class: x ≡ y iff x - y in k.
        for &x in &class {
            if proj[x] != usize::MAX {
                continue;
            }
            let zero_coset = k.contains(x);
            let id = if zero_coset { 0 } else { coset_reprs.len() };
            for &y in &class {
                if proj[y] == usize::MAX {
                    let d = h.sub(y, x).expect("same class");
                    if k.contains(d) {
                        proj[y] = id;
                    }
                }
            }
            if !zero_coset {
                coset_reprs.push(x);
            }
        }
    }
    let m = coset_reprs.len();
    let mut addible = vec![false; m * m];
    let mut sum = vec![None; m * m];
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (coset_reprs[i], coset_reprs[j]);
            if h.addible(x, y) {
                addible[i * m + j] = true;
                sum[i * m + j] = Some(proj[h.sum(x, y).unwrap()] as u16);
            }
        }
    }
    // Cosets of a class whose section became everything collapse to zero;
    // zero is addible with all surviving cosets, which the representative
    // arithmetic above already covers because representatives of the zero
    // coset are k-members only when zero itself is the representative.
    Ok((Homogroupoid { n: m, addible, sum }, proj))
}

/// Every graduation of a group (sets of strict components forming an
/// internal direct sum), canonically ordered. Exhaustive; intended for
/// small groups and test oracles.
pub fn enumerate_graduations(
    group: &FiniteAbelianGroup,
    max_group_size: usize,
) -> Result<Vec<Graduation>> {
    let n = group.element_count();
    if n > max_group_size {
        return Err(Error::Resource(format!(
            "graduation enumeration over {n} elements exceeds bound {max_group_size}"
        )));
    }
    if n == 1 {
        return Ok(vec![Graduation::trivial(group.clone())]);
    }
    let subgroups: Vec<Subgroup> = group
        .enumerate_subgroups(max_group_size)?
        .into_iter()
        .filter(|s| s.len() >= 2)
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    // Accumulated set of distinct sums reachable from the chosen parts.
    fn extend(
        group: &FiniteAbelianGroup,
        subgroups: &[Subgroup],
        from: usize,
        acc: &ElemSet,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Graduation>,
    ) {
        if acc.len() == group.element_count() {
            let parts: Vec<Subgroup> = chosen.iter().map(|&i| subgroups[i].clone()).collect();
            out.push(Graduation::new(group.clone(), parts).expect("checked direct sum"));
            return;
        }
        for i in from..subgroups.len() {
            let part = &subgroups[i];
            if acc.len() * part.len() > group.element_count() {
                continue;
            }
            // All pairwise sums must be fresh for injectivity.
            let mut bigger = ElemSet::empty(group.element_count());
            let mut ok = true;
            'fill: for a in acc.iter() {
                for p in part.member_set.iter() {
                    if !bigger.insert(group.add_ids(a, p)) {
                        ok = false;
                        break 'fill;
                    }
                }
            }
            if !ok || bigger.len() != acc.len() * part.len() {
                continue;
            }
            chosen.push(i);
            extend(group, subgroups, i + 1, &bigger, chosen, out);
            chosen.pop();
        }
    }
    let acc = ElemSet::singleton(n, 0);
    extend(group, &subgroups, 0, &acc, &mut chosen, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v4() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![2, 2]).unwrap()
    }

    fn z4() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![4]).unwrap()
    }

    fn v4_two_component() -> Graduation {
        let g = v4();
        let a = g.subgroup_from_ids(&[g.index_of(&crate::finabel::GroupElement {
            residues: vec![1, 0],
        })]);
        let b = g.subgroup_from_ids(&[g.index_of(&crate::finabel::GroupElement {
            residues: vec![0, 1],
        })]);
        Graduation::new(g, vec![a, b]).unwrap()
    }

    #[test]
    fn homogeneous_part_of_v4_two_component() {
        let grad = v4_two_component();
        let hp = homogeneous_part(&grad);
        assert_eq!(hp.carrier.len(), 3);
        assert!(hp.carrier.contains(0));
    }

    #[test]
    fn homogeneous_part_of_trivial_graduation_is_everything() {
        let grad = Graduation::trivial(z4());
        let hp = homogeneous_part(&grad);
        assert_eq!(hp.carrier.len(), 4);
    }

    #[test]
    fn improper_graduation_rejected() {
        let g = z4();
        let half = g.subgroup_from_ids(&[2]);
        assert!(Graduation::new(g, vec![half]).is_err());
    }

    #[test]
    fn homogeneous_part_axioms_on_v4() {
        let g = v4();
        let h = ElemSet::from_iter(4, [0, 1, 2]); // 0, (1,0), (0,1)
        let r = verify_homogeneous_part_axioms(&g, &h).unwrap();
        assert!(r.passed, "{:?}", r.conditions);

        let missing_zero = ElemSet::from_iter(4, [1]);
        let r = verify_homogeneous_part_axioms(&g, &missing_zero).unwrap();
        assert_eq!(r.condition("i-zero-element").unwrap().passed, Some(false));

        let all_z4 = ElemSet::full(4);
        let r = verify_homogeneous_part_axioms(&z4(), &all_z4).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn vanishing_sum_condition_catches_z4_gap() {
        // {0,1,3} in Z4: 1+1 = 2 outside H, the family (1,1,1,1) sums to 0.
        let g = z4();
        let h = ElemSet::from_iter(4, [0, 1, 3]);
        let r = verify_homogeneous_part_axioms(&g, &h).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn vanishing_sum_condition_catches_hidden_relation() {
        // {0, e1, e2, e3, e1+e2+e3} in Z2^3: i–iii and v hold, vi fails.
        let g = FiniteAbelianGroup::new(vec![2, 2, 2]).unwrap();
        let ids: Vec<usize> = [
            vec![0u64, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
        ]
        .iter()
        .map(|r| g.index_of(&crate::finabel::GroupElement { residues: r.clone() }))
        .collect();
        let h = ElemSet::from_iter(8, ids);
        let r = verify_homogeneous_part_axioms(&g, &h).unwrap();
        assert_eq!(
            r.condition("vi-no-vanishing-non-addible-sum").unwrap().passed,
            Some(false)
        );
        assert_eq!(r.condition("iii-addibility-transfer").unwrap().passed, Some(true));
    }

    #[test]
    fn homogroupoid_axioms_and_classes() {
        let grad = v4_two_component();
        let (h, _) = Homogroupoid::from_homogeneous_part(grad.group(), &homogeneous_part(&grad));
        let r = verify_homogroupoid(&h);
        assert!(r.passed, "{:?}", r.conditions);
        assert_eq!(h.classes().len(), 2);

        // Trivial carrier {0}.
        let t = Homogroupoid::from_tables(1, vec![true], vec![Some(0)]).unwrap();
        assert!(verify_homogroupoid(&t).passed);
        assert!(t.classes().is_empty());
    }

    #[test]
    fn homogroupoid_sum_domain_mismatch_detected() {
        // a#a declared but a+a undefined.
        let mut addible = vec![false; 9];
        let mut sum: Vec<Option<u16>> = vec![None; 9];
        let idx = |x: usize, y: usize| x * 3 + y;
        for x in 0..3 {
            addible[idx(0, x)] = true;
            addible[idx(x, 0)] = true;
            sum[idx(0, x)] = Some(x as u16);
            sum[idx(x, 0)] = Some(x as u16);
        }
        addible[idx(1, 1)] = true; // but sum left undefined
        addible[idx(2, 2)] = true;
        sum[idx(2, 2)] = Some(0);
        let h = Homogroupoid::from_tables(3, addible, sum).unwrap();
        let r = verify_homogroupoid(&h);
        assert_eq!(r.condition("structural-sum-domain").unwrap().passed, Some(false));
    }

    #[test]
    fn linearize_two_z2_classes_gives_v4() {
        let grad = v4_two_component();
        let (h, _) = Homogroupoid::from_homogeneous_part(grad.group(), &homogeneous_part(&grad));
        let lin = linearize(&h).unwrap();
        assert_eq!(lin.group.element_count(), 4);
        assert_eq!(lin.group.cyclic_orders(), &[2, 2]);
        assert_eq!(lin.graduation.strict_grade_count(), 2);
    }

    #[test]
    fn linearize_trivial_and_single_class() {
        let t = Homogroupoid::from_tables(1, vec![true], vec![Some(0)]).unwrap();
        let lin = linearize(&t).unwrap();
        assert_eq!(lin.group.element_count(), 1);

        let g = z4();
        let (h, _) =
            Homogroupoid::from_homogeneous_part(&g, &homogeneous_part(&Graduation::trivial(g.clone())));
        let lin = linearize(&h).unwrap();
        assert_eq!(lin.group.element_count(), 4);
        assert_eq!(lin.group.cyclic_orders(), &[4]);
    }

    #[test]
    fn roundtrip_on_sample_homogroupoids() {
        for grad in [
            v4_two_component(),
            Graduation::trivial(z4()),
            Graduation::trivial(v4()),
        ] {
            let (h, _) = Homogroupoid::from_homogeneous_part(grad.group(), &homogeneous_part(&grad));
            assert!(roundtrip_check(&h).unwrap());
        }
        let t = Homogroupoid::from_tables(1, vec![true], vec![Some(0)]).unwrap();
        assert!(roundtrip_check(&t).unwrap());
    }

    #[test]
    fn homogeneous_part_completeness_oracle() {
        // For every subset H of a small group, the axioms pass iff some
        // graduation has homogeneous part H.
        for orders in [vec![2u64, 2], vec![4], vec![2, 4], vec![3, 3]] {
            let g = FiniteAbelianGroup::new(orders).unwrap();
            let n = g.element_count();
            let grads = enumerate_graduations(&g, 16).unwrap();
            let parts: Vec<ElemSet> = grads.iter().map(|gr| homogeneous_part(gr).carrier).collect();
            for mask in 0..(1u32 << n) {
                let h = ElemSet::from_iter(n, (0..n).filter(|i| mask >> i & 1 == 1));
                let passes = verify_homogeneous_part_axioms(&g, &h).unwrap().passed;
                let is_part = parts.contains(&h);
                assert_eq!(passes, is_part, "group {:?} H {:?}", g.cyclic_orders(), h);
            }
        }
    }

    #[test]
    fn homomorphism_checks() {
        let grad = v4_two_component();
        let (h, _) = Homogroupoid::from_homogeneous_part(grad.group(), &homogeneous_part(&grad));
        // Identity: both flags.
        let id = PartialMap {
            source: h.clone(),
            target: h.clone(),
            value: (0..h.size() as u16).collect(),
        };
        let r = verify_homomorphism(&id);
        assert!(r.passed);

        // Constant zero: both hold (no nonzero images).
        let zero = PartialMap {
            source: h.clone(),
            target: h.clone(),
            value: vec![0; h.size()],
        };
        let r = verify_homomorphism(&zero);
        assert!(r.passed);

        // Collapse {0,a,b} -> {0,c}: quasihomomorphism but not homomorphism.
        let z2 = FiniteAbelianGroup::new(vec![2]).unwrap();
        let (target, _) = Homogroupoid::from_homogeneous_part(
            &z2,
            &homogeneous_part(&Graduation::trivial(z2.clone())),
        );
        let collapse = PartialMap {
            source: h,
            target,
            value: vec![0, 1, 1],
        };
        let r = verify_homomorphism(&collapse);
        assert_eq!(r.condition("quasihomomorphism").unwrap().passed, Some(true));
        assert_eq!(r.condition("homomorphism").unwrap().passed, Some(false));
    }

    #[test]
    fn factor_by_subhomogroupoid() {
        let grad = v4_two_component();
        let (h, _) = Homogroupoid::from_homogeneous_part(grad.group(), &homogeneous_part(&grad));
        // Quotient by one whole class: carrier shrinks to {0, other}.
        let class0 = h.classes()[0][0];
        let k = ElemSet::from_iter(h.size(), [0, class0]);
        let (f, proj) = factor_homogroupoid(&h, &k).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(proj[class0], 0);
        assert!(verify_homogroupoid(&f).passed);
    }

    #[test]
    fn addibility_matches_grades() {
        let grad = v4_two_component();
        let hp = homogeneous_part(&grad);
        let (h, to_group) = Homogroupoid::from_homogeneous_part(grad.group(), &hp);
        for x in 0..h.size() {
            for y in 0..h.size() {
                let expect = x == 0
                    || y == 0
                    || hp.grade_of[to_group[x]] == hp.grade_of[to_group[y]];
                assert_eq!(h.addible(x, y), expect);
            }
        }
    }

    #[test]
    fn graduation_enumeration_of_v4() {
        // V4: trivial + three two-component splits.
        let grads = enumerate_graduations(&v4(), 16).unwrap();
        assert_eq!(grads.len(), 4);
    }

    #[test]
    fn cyclic_decomposition_of_z6_table() {
        let z6 = FiniteAbelianGroup::new(vec![6]).unwrap();
        let (orders, coords) = cyclic_decomposition(6, &|a, b| z6.add_ids(a, b));
        assert_eq!(orders, vec![6]);
        assert_eq!(coords.len(), 6);
        let v4 = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let (orders, _) = cyclic_decomposition(4, &|a, b| v4.add_ids(a, b));
        assert_eq!(orders, vec![2, 2]);
    }
}
