#pragma once

// Umbrella header for the arcpoly library.

#include <arcpoly/ac_polynomials.hpp>
#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/catalog.hpp>
#include <arcpoly/errors.hpp>
#include <arcpoly/experiment.hpp>
#include <arcpoly/fourier.hpp>
#include <arcpoly/grid_function.hpp>
#include <arcpoly/measure.hpp>
#include <arcpoly/perturbed_weights.hpp>
#include <arcpoly/plot.hpp>
#include <arcpoly/quadrature.hpp>
#include <arcpoly/serialization.hpp>
#include <arcpoly/stats.hpp>
#include <arcpoly/transforms.hpp>
#include <arcpoly/version.hpp>
