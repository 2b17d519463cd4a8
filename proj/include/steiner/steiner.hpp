#ifndef STEINER_STEINER_HPP
#define STEINER_STEINER_HPP

#include "steiner/arrangement.hpp"
#include "steiner/boundary_search.hpp"
#include "steiner/constrained.hpp"
#include "steiner/envelope.hpp"
#include "steiner/errors.hpp"
#include "steiner/general_position.hpp"
#include "steiner/geometry.hpp"
#include "steiner/io.hpp"
#include "steiner/optimize.hpp"
#include "steiner/parallel.hpp"
#include "steiner/region_search.hpp"
#include "steiner/triangulation.hpp"
#include "steiner/verification.hpp"

#endif // STEINER_STEINER_HPP
