use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{Chart, FdScheme, FrameSource, MovingFrame};
use crate::{Error, Result};

/// One axis of a rectangular parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub resolution: usize,
    /// Periodic axes wrap around and impose no stencil bounds.
    pub periodic: bool,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, resolution: usize) -> Self {
        Self { min, max, resolution, periodic: false }
    }

    pub fn periodic(min: f64, max: f64, resolution: usize) -> Self {
        Self { min, max, resolution, periodic: true }
    }

    pub fn value(&self, i: usize) -> f64 {
        let span = self.max - self.min;
        if self.periodic {
            self.min + span * i as f64 / self.resolution as f64
        } else if self.resolution <= 1 {
            self.min
        } else {
            self.min + span * i as f64 / (self.resolution - 1) as f64
        }
    }
}

/// Frames over a rectangular grid, sign-aligned by breadth-first
/// propagation from the first valid node.
pub struct FrameField<'a> {
    source: &'a dyn FrameSource,
    axes: Vec<GridAxis>,
    fd: FdScheme,
    frames: Vec<Result<MovingFrame>>,
    continuity: Vec<bool>,
}

impl<'a> FrameField<'a> {
    /// Evaluates every node sequentially.
    pub fn build(source: &'a dyn FrameSource, axes: Vec<GridAxis>, fd: FdScheme) -> Self {
        let count: usize = axes.iter().map(|a| a.resolution).product();
        let frames = (0..count).map(|i| source.frame(&params(&axes, i))).collect();
        Self::from_frames(source, axes, fd, frames)
    }

    /// Uses frames evaluated elsewhere (e.g. in parallel), in node order.
    pub fn from_frames(
        source: &'a dyn FrameSource,
        axes: Vec<GridAxis>,
        fd: FdScheme,
        mut frames: Vec<Result<MovingFrame>>,
    ) -> Self {
        let count = frames.len();
        let mut continuity = vec![true; count];
        let mut visited = vec![false; count];
        for seed in 0..count {
            if visited[seed] || frames[seed].is_err() {
                continue;
            }
            visited[seed] = true;
            let mut queue = VecDeque::from([seed]);
            while let Some(node) = queue.pop_front() {
                let parent = match &frames[node] {
                    Ok(f) => f.clone(),
                    Err(_) => continue,
                };
                for next in neighbours(&axes, node) {
                    if visited[next] {
                        continue;
                    }
                    visited[next] = true;
                    if let Ok(f) = &mut frames[next] {
                        let overlap = f.align_to(&parent);
                        continuity[next] = overlap >= 0.5;
                        queue.push_back(next);
                    }
                }
            }
        }
        Self { source, axes, fd, frames, continuity }
    }

    pub fn source(&self) -> &'a dyn FrameSource {
        self.source
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn fd(&self) -> FdScheme {
        self.fd
    }

    pub fn node_count(&self) -> usize {
        self.frames.len()
    }

    pub fn params(&self, node: usize) -> Vec<f64> {
        params(&self.axes, node)
    }

    pub fn multi_index(&self, node: usize) -> Vec<usize> {
        multi_index(&self.axes, node)
    }

    pub fn frame(&self, node: usize) -> Result<&MovingFrame> {
        self.frames[node].as_ref().map_err(Clone::clone)
    }

    /// Whether the node's frame overlaps its BFS parent by at least 0.5.
    pub fn continuous(&self, node: usize) -> bool {
        self.continuity[node]
    }

    /// Chart at a node, bounded by the non-periodic axes and referenced to
    /// the aligned node frame.
    pub fn chart(&self, node: usize) -> Result<Chart<'a>> {
        self.chart_with(node, self.fd)
    }

    pub fn chart_with(&self, node: usize, fd: FdScheme) -> Result<Chart<'a>> {
        let frame = self.frame(node)?.clone();
        let (lo, hi) = self
            .axes
            .iter()
            .map(|a| if a.periodic { (f64::NEG_INFINITY, f64::INFINITY) } else { (a.min, a.max) })
            .unzip();
        Ok(Chart::new(self.source, &self.params(node), fd).with_bounds(lo, hi).with_reference(frame))
    }

    /// Grid neighbours (periodic axes wrap).
    pub fn neighbours(&self, node: usize) -> Vec<usize> {
        neighbours(&self.axes, node)
    }

    /// Errors for nodes whose frame could not be built.
    pub fn failures(&self) -> impl Iterator<Item = (usize, &Error)> {
        self.frames.iter().enumerate().filter_map(|(i, f)| f.as_ref().err().map(|e| (i, e)))
    }
}

fn multi_index(axes: &[GridAxis], mut node: usize) -> Vec<usize> {
    // Row-major: the last axis varies fastest.
    let mut idx = vec![0; axes.len()];
    for (k, axis) in axes.iter().enumerate().rev() {
        idx[k] = node % axis.resolution;
        node /= axis.resolution;
    }
    idx
}

fn flat_index(axes: &[GridAxis], idx: &[usize]) -> usize {
    axes.iter().zip(idx).fold(0, |acc, (a, &i)| acc * a.resolution + i)
}

fn params(axes: &[GridAxis], node: usize) -> Vec<f64> {
    multi_index(axes, node).iter().zip(axes).map(|(&i, a)| a.value(i)).collect()
}

fn neighbours(axes: &[GridAxis], node: usize) -> Vec<usize> {
    let idx = multi_index(axes, node);
    let mut out = Vec::new();
    for (k, axis) in axes.iter().enumerate() {
        for step in [-1i64, 1] {
            let j = idx[k] as i64 + step;
            let j = if axis.periodic {
                j.rem_euclid(axis.resolution as i64)
            } else if j < 0 || j >= axis.resolution as i64 {
                continue;
            } else {
                j
            };
            let mut m = idx.clone();
            m[k] = j as usize;
            let f = flat_index(axes, &m);
            if f != node && !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing_round_trips() {
        let axes = [GridAxis::new(0.0, 1.0, 3), GridAxis::periodic(0.0, 1.0, 4)];
        for node in 0..12 {
            assert_eq!(flat_index(&axes, &multi_index(&axes, node)), node);
        }
        assert_eq!(params(&axes, 5), vec![0.5, 0.25]);
        let mut nb = neighbours(&axes, 0);
        nb.sort();
        assert_eq!(nb, vec![1, 3, 4]);
    }
}
