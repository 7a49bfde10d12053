#pragma once

#include "cqs/hjcf.hpp"
#include "cqs/mmp.hpp"
#include "cqs/tclass.hpp"

#include <stdexcept>
#include <string>

namespace cqs {

// Malformed text; kept apart from domain errors so callers can tell a usage
// mistake from a mathematically invalid input.
struct parse_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Text syntax used by the command line and the Python layer.

// "19/7"
Fraction parse_fraction(const std::string& s);
// "[3,4,2]"
Chain parse_chain(const std::string& s);
// "[3,5*,2]": the starred entry carries the (-1)-curve.
Mk1A parse_mk1a(const std::string& s);
// "[(7,5)]-1-[(2,1)]" or "[2,5]-1-[2,2,6]"; chains are read as displayed,
// so the left one is reversed before recognition.
Mk2A parse_mk2a(const std::string& s);
// "3-[4]-2", "[4]-1-[5,2]"; bracket groups are contracted runs.
AnnotatedChain parse_annotated(const std::string& s);

std::string render_mk1a(const Mk1A& x);

// Graphviz rendering; contracted runs are drawn as boxes.
std::string to_dot(const MarkedGraph& g, const std::string& name = "G");

}  // namespace cqs
