#pragma once

#include "ballpoly/tolerance.hpp"
#include "ballpoly/geom.hpp"
#include "ballpoly/hull.hpp"
#include "ballpoly/ball_polyhedron.hpp"
#include "ballpoly/angles.hpp"
#include "ballpoly/voronoi.hpp"
#include "ballpoly/simplicial.hpp"
#include "ballpoly/truncated.hpp"
#include "ballpoly/rigidity.hpp"
#include "ballpoly/mesh.hpp"
#include "ballpoly/pipeline.hpp"
