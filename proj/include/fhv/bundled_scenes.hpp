// Copyright 2026 The FHV Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "fhv/scene.hpp"

namespace fhv {

// Small test scenes, already laid out inside the unit cube.

/// Three overlapping axis-aligned quads stacked along z. Emission order is
/// green, red, blue; along -z (the +z capture direction) the order is red,
/// green, blue. The triple overlap is [0.4, 0.6]^2 in x/y.
Scene make_three_quads(double alpha = 1.0 / 3.0);

/// Subdivided icosahedron (radius 0.4, centered in the cube). Every base face
/// and its subdivisions carry their own object id.
Scene make_icosphere(int subdivisions = 2);

/// Square plane x = 0.5 spanning [0.1, 0.9] in y and z, i.e. edge-on to the
/// +z capture direction.
Scene make_edge_on_plane();

/// Closed box room [0.1, 0.9]^3 with red/green side walls and two closed
/// inner blocks. The short block (alpha 0.5) and the front wall (alpha 0.2)
/// are translucent.
Scene make_cornell_box();

std::vector<std::string> bundled_scene_names();

/// Looks up a scene by name ("three-quads", "icosphere", "edge-on-plane",
/// "cornell-box").
Scene bundled_scene(const std::string& name);

}  // namespace fhv
