#pragma once

// Plot emission: renders an aggregate as a self-contained SVG line chart
// (median polyline over an interquartile band, linear step axis, log-scale
// value axis) plus the structural reader used to validate emitted files.

#include <string>

#include "facopt/quantiles.hpp"

namespace facopt {

// Renders the chart. Values at or below zero cannot sit on a log axis and
// are clamped to just under the smallest positive value in the data.
// Requires a nonempty aggregate.
std::string render_aggregate_svg(const Aggregate& agg,
                                 const std::string& title);

// Structural well-formedness check for the emitter's output: every tag
// closes in order, attribute quoting is balanced, and the document contains
// an svg root. Not a general XML parser; it accepts exactly the subset the
// emitter produces.
bool svg_well_formed(const std::string& text);

}  // namespace facopt
