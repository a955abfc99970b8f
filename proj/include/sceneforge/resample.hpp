#pragma once

#include <string>

#include "sceneforge/image.hpp"

namespace sceneforge {

enum class Sampling { nearest, bilinear, bicubic };

Sampling sampling_from_string(const std::string& name);  // throws std::invalid_argument
std::string to_string(Sampling method);

/// Maps an arbitrary angle into [0, 360).
double normalize_degrees(double degrees);

/// Quarter-turn count 0..3 when the normalized angle is an exact multiple
/// of 90 degrees, -1 otherwise.
int quarter_turns(double normalized_deg);

/// Resamples to out_w x out_h. Source coordinates are clamped at the
/// borders. Interpolation runs on alpha-premultiplied values so colors
/// never bleed in from transparent regions; color under fully transparent
/// output pixels is zeroed.
Image resample(const Image& src, int out_w, int out_h, Sampling method);

/// Rotates counterclockwise (in x-right/y-up terms) by an arbitrary angle.
/// The canvas grows to fit the rotated content; uncovered output pixels
/// are fully transparent. Exact multiples of 90 degrees take a lossless
/// pixel-permutation path.
Image rotate_image(const Image& src, double degrees, Sampling method);

}  // namespace sceneforge
