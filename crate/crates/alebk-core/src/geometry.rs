//! Pure geometry from precomputed 68-point facial landmarks to aligned,
//! cropped, resized 50x50x3 eye images.
//!
//! Conventions: images are `[H, W, 3]` tensors; a pixel is a point sample at
//! integer coordinates `(x = column, y = row)`. Bilinear sampling reads zero
//! outside the image.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::blink::{EYE_CHANNELS, EYE_SIDE};
use crate::math;
use crate::tensor::Tensor;
use crate::{Error, Result};

/// Number of landmark points in the 68-point convention.
pub const LANDMARK_COUNT: usize = 68;
/// Landmark indices of the left eye (36..=41).
pub const LEFT_EYE: core::ops::Range<usize> = 36..42;
/// Landmark indices of the right eye (42..=47).
pub const RIGHT_EYE: core::ops::Range<usize> = 42..48;

/// 2D point in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        math::hypot(self.x - other.x, self.y - other.y)
    }
}

/// A validated 68-point landmark set with the dimensions of its image.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet {
    points: Vec<Point>,
    width: usize,
    height: usize,
}

impl LandmarkSet {
    /// Builds a landmark set, clamping every point into the image bounds.
    pub fn new(points: Vec<Point>, width: usize, height: usize) -> Result<Self> {
        if points.len() != LANDMARK_COUNT {
            return Err(Error::InvalidInput(format!(
                "expected {LANDMARK_COUNT} landmarks, got {}",
                points.len()
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("image dimensions must be positive".into()));
        }
        let points = points
            .into_iter()
            .map(|p| Point {
                x: p.x.clamp(0.0, (width - 1) as f64),
                y: p.y.clamp(0.0, (height - 1) as f64),
            })
            .collect();
        Ok(Self {
            points,
            width,
            height,
        })
    }

    /// Transformed landmarks may leave the frame, so this constructor skips
    /// clamping; out-of-frame regions are zero-padded when cropping.
    fn from_transformed(points: Vec<Point>, width: usize, height: usize) -> Self {
        debug_assert_eq!(points.len(), LANDMARK_COUNT);
        Self {
            points,
            width,
            height,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// Centroid of each eye's six landmark points: `(left, right)`.
pub fn eye_centers(landmarks: &LandmarkSet) -> (Point, Point) {
    let centroid = |range: core::ops::Range<usize>| {
        let pts = &landmarks.points[range];
        let n = pts.len() as f64;
        Point {
            x: pts.iter().map(|p| p.x).sum::<f64>() / n,
            y: pts.iter().map(|p| p.y).sum::<f64>() / n,
        }
    };
    (centroid(LEFT_EYE), centroid(RIGHT_EYE))
}

/// Rotates `p` about `center` by `angle` radians.
pub fn rotate_point(p: Point, center: Point, angle: f64) -> Point {
    let (s, c) = (math::sin(angle), math::cos(angle));
    let (dx, dy) = (p.x - center.x, p.y - center.y);
    Point {
        x: center.x + c * dx - s * dy,
        y: center.y + s * dx + c * dy,
    }
}

/// Bilinear read of a `[H, W, 3]` image at a continuous position; positions
/// outside the image contribute zero.
pub fn bilinear_sample(image: &Tensor, x: f64, y: f64) -> [f64; 3] {
    let shape = image.shape();
    let (h, w) = (shape[0] as isize, shape[1] as isize);
    let x0 = math::floor(x);
    let y0 = math::floor(y);
    let fx = x - x0;
    let fy = y - y0;
    let (x0, y0) = (x0 as isize, y0 as isize);

    let mut out = [0.0f64; 3];
    let taps = [
        (x0, y0, (1.0 - fx) * (1.0 - fy)),
        (x0 + 1, y0, fx * (1.0 - fy)),
        (x0, y0 + 1, (1.0 - fx) * fy),
        (x0 + 1, y0 + 1, fx * fy),
    ];
    for (tx, ty, weight) in taps {
        if tx < 0 || ty < 0 || tx >= w || ty >= h {
            continue;
        }
        let base = image.idx3(ty as usize, tx as usize, 0);
        let px = &image.data()[base..base + 3];
        for (o, &v) in out.iter_mut().zip(px) {
            *o += weight * v;
        }
    }
    out
}

/// A face rotated so the eye centers share a horizontal line.
#[derive(Debug, Clone)]
pub struct AlignedFace {
    pub image: Tensor,
    pub landmarks: LandmarkSet,
    /// Rotation that was applied, in radians.
    pub angle: f64,
}

/// Rotates image and landmarks about the inter-eye midpoint by
/// `-atan2(dy, dx)` so the eyes land on a horizontal line. The inter-eye
/// distance is preserved.
pub fn align_face(image: &Tensor, landmarks: &LandmarkSet) -> Result<AlignedFace> {
    let shape = image.shape();
    if shape.len() != 3 || shape[2] != EYE_CHANNELS {
        return Err(Error::ShapeMismatch(format!(
            "face image must be [H, W, 3], got {shape:?}"
        )));
    }
    if shape[0] != landmarks.height || shape[1] != landmarks.width {
        return Err(Error::ShapeMismatch(format!(
            "image is {}x{} but landmarks were detected on {}x{}",
            shape[1], shape[0], landmarks.width, landmarks.height
        )));
    }
    let (left, right) = eye_centers(landmarks);
    let (dx, dy) = (right.x - left.x, right.y - left.y);
    if math::hypot(dx, dy) < 1e-9 {
        return Err(Error::InvalidInput(
            "eye centers coincide; cannot derive an alignment angle".into(),
        ));
    }
    let angle = -math::atan2(dy, dx);
    let center = Point {
        x: (left.x + right.x) / 2.0,
        y: (left.y + right.y) / 2.0,
    };

    let rotated_points: Vec<Point> = landmarks
        .points
        .iter()
        .map(|&p| rotate_point(p, center, angle))
        .collect();

    let (h, w) = (shape[0], shape[1]);
    let rotated_image = if angle == 0.0 {
        image.clone()
    } else {
        let mut out = Tensor::zeros(vec![h, w, EYE_CHANNELS]);
        for oy in 0..h {
            for ox in 0..w {
                // Inverse map: where did this output pixel come from?
                let src = rotate_point(
                    Point {
                        x: ox as f64,
                        y: oy as f64,
                    },
                    center,
                    -angle,
                );
                let px = bilinear_sample(image, src.x, src.y);
                let base = out.idx3(oy, ox, 0);
                out.data_mut()[base..base + 3].copy_from_slice(&px);
            }
        }
        out
    };

    Ok(AlignedFace {
        image: rotated_image,
        landmarks: LandmarkSet::from_transformed(rotated_points, w, h),
        angle,
    })
}

/// Axis-aligned box in point coordinates.
#[derive(Debug, Clone, Copy)]
struct BoundingBox {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

fn eye_box(points: &[Point], margin: f64) -> Result<BoundingBox> {
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    if w <= 0.0 && h <= 0.0 {
        return Err(Error::InvalidInput(
            "degenerate eye bounding box: all landmarks coincide".into(),
        ));
    }
    // Expand each side by the margin fraction of the extent, then square the
    // box about its center so the 50x50 resample has unit aspect.
    let (x0, x1) = (x0 - margin * w, x1 + margin * w);
    let (y0, y1) = (y0 - margin * h, y1 + margin * h);
    let side = (x1 - x0).max(y1 - y0);
    let cx = (x0 + x1) / 2.0;
    let cy = (y0 + y1) / 2.0;
    Ok(BoundingBox {
        x0: cx - side / 2.0,
        y0: cy - side / 2.0,
        x1: cx + side / 2.0,
        y1: cy + side / 2.0,
    })
}

fn resample_box(image: &Tensor, bbox: BoundingBox, out_side: usize) -> Result<Tensor> {
    let shape = image.shape();
    let (h, w) = (shape[0] as f64, shape[1] as f64);
    if bbox.x1 < 0.0 || bbox.y1 < 0.0 || bbox.x0 > w - 1.0 || bbox.y0 > h - 1.0 {
        return Err(Error::InvalidInput(format!(
            "eye box [{:.1}, {:.1}]x[{:.1}, {:.1}] lies fully outside the {w}x{h} image",
            bbox.x0, bbox.x1, bbox.y0, bbox.y1
        )));
    }
    let step_x = (bbox.x1 - bbox.x0) / (out_side - 1) as f64;
    let step_y = (bbox.y1 - bbox.y0) / (out_side - 1) as f64;
    let mut out = Tensor::zeros(vec![out_side, out_side, EYE_CHANNELS]);
    for i in 0..out_side {
        let sy = bbox.y0 + step_y * i as f64;
        for j in 0..out_side {
            let sx = bbox.x0 + step_x * j as f64;
            let px = bilinear_sample(image, sx, sy);
            let base = out.idx3(i, j, 0);
            out.data_mut()[base..base + 3].copy_from_slice(&px);
        }
    }
    Ok(out)
}

/// Default eye-box expansion: 0.4 x landmark extent on each side, so the
/// crop keeps the eyelid region above the landmark hull.
pub const DEFAULT_EYE_MARGIN: f64 = 0.4;

/// Crops both eyes from an aligned face and resizes them to 50x50x3 with
/// bilinear resampling. Regions outside the image are zero-padded; a box
/// fully outside the image is rejected.
pub fn crop_and_resize(face: &AlignedFace, margin: f64) -> Result<(Tensor, Tensor)> {
    if !(0.0..=5.0).contains(&margin) {
        return Err(Error::InvalidInput(format!(
            "eye margin must be in [0, 5], got {margin}"
        )));
    }
    let left_box = eye_box(&face.landmarks.points[LEFT_EYE], margin)?;
    let right_box = eye_box(&face.landmarks.points[RIGHT_EYE], margin)?;
    let left = resample_box(&face.image, left_box, EYE_SIDE)?;
    let right = resample_box(&face.image, right_box, EYE_SIDE)?;
    Ok((left, right))
}

/// Bilinear resize of a whole `[H, W, 3]` image (align-corners sampling).
pub fn resize_bilinear(image: &Tensor, out_h: usize, out_w: usize) -> Result<Tensor> {
    let shape = image.shape();
    if shape.len() != 3 || shape[2] != EYE_CHANNELS {
        return Err(Error::ShapeMismatch(format!(
            "resize input must be [H, W, 3], got {shape:?}"
        )));
    }
    if out_h < 2 || out_w < 2 || shape[0] < 2 || shape[1] < 2 {
        return Err(Error::InvalidInput(
            "resize needs at least 2x2 input and output".into(),
        ));
    }
    let step_y = (shape[0] - 1) as f64 / (out_h - 1) as f64;
    let step_x = (shape[1] - 1) as f64 / (out_w - 1) as f64;
    let mut out = Tensor::zeros(vec![out_h, out_w, EYE_CHANNELS]);
    for i in 0..out_h {
        for j in 0..out_w {
            let px = bilinear_sample(image, step_x * j as f64, step_y * i as f64);
            let base = out.idx3(i, j, 0);
            out.data_mut()[base..base + 3].copy_from_slice(&px);
        }
    }
    Ok(out)
}
