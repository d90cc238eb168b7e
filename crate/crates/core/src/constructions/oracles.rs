//! Brute-force minima used as independent oracles for the constructions.
//! Nothing here goes through the category layer or the engine.

/// A colouring of `n` cells with `r` colours in which no box is
/// monochromatic, or `None` when every colouring has a monochromatic box.
///
/// Depth-first over cells in index order; a box is checked when its last
/// cell is coloured, and colour `c` is only tried at a cell once colours
/// `0..c` have all been used before it.
pub fn avoiding_coloring(n: usize, boxes: &[Vec<usize>], r: u32) -> Option<Vec<u32>> {
    if r == 0 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    if boxes.iter().any(|b| b.len() <= 1) {
        return None;
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, b) in boxes.iter().enumerate() {
        if let Some(&last) = b.iter().max() {
            closing[last].push(i);
        }
    }
    let mut colors = vec![0u32; n];
    // next colour to try at each depth, and colours in use before it
    let mut next = vec![0u32; n + 1];
    let mut used = vec![0u32; n + 1];
    let mut i = 0usize;
    loop {
        if i == n {
            return Some(colors);
        }
        let limit = (used[i] + 1).min(r);
        if next[i] >= limit {
            if i == 0 {
                return None;
            }
            i -= 1;
            continue;
        }
        let c = next[i];
        next[i] += 1;
        colors[i] = c;
        let mono = closing[i].iter().any(|&bi| boxes[bi].iter().all(|&x| colors[x] == c));
        if mono {
            continue;
        }
        used[i + 1] = used[i].max(c + 1);
        next[i + 1] = 0;
        i += 1;
    }
}

fn subsets(n: u64, k: u64) -> Vec<Vec<u64>> {
    fn rec(start: u64, n: u64, k: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() as u64 == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() as u64 {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Cells are the tuples `(a_i)` with `a_i` a `k_i`-subset of `[q_i]`; each
/// box is the set of cells inside one tuple of `p_i`-subsets. Returns the
/// cell count and the boxes.
pub fn grid_boxes(k: &[u64], p: &[u64], q: &[u64]) -> (usize, Vec<Vec<usize>>) {
    let cell_axes: Vec<Vec<Vec<u64>>> = k.iter().zip(q).map(|(&ki, &qi)| subsets(qi, ki)).collect();
    let box_axes: Vec<Vec<Vec<u64>>> = p.iter().zip(q).map(|(&pi, &qi)| subsets(qi, pi)).collect();
    let n: usize = cell_axes.iter().map(Vec::len).product();
    let mut boxes = Vec::new();
    let mut pick = vec![0usize; box_axes.len()];
    if box_axes.iter().any(Vec::is_empty) {
        return (n, boxes);
    }
    loop {
        // the cells inside the current box, per axis
        let inside: Vec<Vec<usize>> = pick
            .iter()
            .enumerate()
            .map(|(ax, &j)| {
                (0..cell_axes[ax].len())
                    .filter(|&c| is_subset(&cell_axes[ax][c], &box_axes[ax][j]))
                    .collect()
            })
            .collect();
        let mut cells = vec![0usize];
        for (ax, idx) in inside.iter().enumerate() {
            let stride = cell_axes[ax + 1..].iter().map(Vec::len).product::<usize>();
            cells = cells
                .iter()
                .flat_map(|&base| idx.iter().map(move |&c| base + c * stride))
                .collect();
        }
        boxes.push(cells);
        let mut ax = pick.len();
        loop {
            if ax == 0 {
                return (n, boxes);
            }
            ax -= 1;
            pick[ax] += 1;
            if pick[ax] < box_axes[ax].len() {
                break;
            }
            pick[ax] = 0;
        }
    }
}

/// Smallest `q ≤ q_max` such that the square instance `q_i = q` forces a
/// monochromatic box, searched exhaustively.
pub fn minimal_product_q(k: &[u64], p: &[u64], r: u32, q_max: u64) -> Option<u64> {
    let lo = p.iter().copied().max().unwrap_or(0).max(1);
    (lo..=q_max).find(|&q| {
        let qs = vec![q; k.len()];
        let (n, boxes) = grid_boxes(k, p, &qs);
        avoiding_coloring(n, &boxes, r).is_none()
    })
}

/// Combinatorial subspaces for words of length `m` over `letters` letters:
/// one box per map `g: [m] → letters ⊔ [l]` hitting every variable, holding
/// the words obtained by substituting letters for the variables.
pub fn hj_boxes(letters: u32, l: u32, m: u32) -> (usize, Vec<Vec<usize>>) {
    let k = letters as usize;
    let n = k.pow(m);
    let symbols = k + l as usize;
    let mut boxes = Vec::new();
    let mut g = vec![0usize; m as usize];
    loop {
        if (0..l as usize).all(|v| g.contains(&(k + v))) {
            let mut cells = Vec::new();
            let mut f = vec![0usize; l as usize];
            loop {
                let word = g
                    .iter()
                    .fold(0usize, |acc, &s| acc * k + if s < k { s } else { f[s - k] });
                cells.push(word);
                let mut j = f.len();
                let mut done = true;
                while j > 0 {
                    j -= 1;
                    f[j] += 1;
                    if f[j] < k {
                        done = false;
                        break;
                    }
                    f[j] = 0;
                }
                if done {
                    break;
                }
            }
            cells.sort_unstable();
            cells.dedup();
            boxes.push(cells);
        }
        let mut j = g.len();
        loop {
            if j == 0 {
                return (n, boxes);
            }
            j -= 1;
            g[j] += 1;
            if g[j] < symbols {
                break;
            }
            g[j] = 0;
        }
    }
}
