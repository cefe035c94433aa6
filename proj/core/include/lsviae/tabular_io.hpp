#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lsviae/cmdp.hpp"

namespace lsviae {

// Plain-text environment description. Lines starting with '#' are comments.
//
//   dims <num_states> <num_actions> <feature_dim>
//   horizon <H>
//   initial_state <s>
//   reward_scale <x>
//   cost_noise none | gaussian <scale>
//   features
//   <s> <a> <phi_1> ... <phi_d>                         one line per (s, a)
//   entries
//   <h> <s> <a> <P(0)> ... <P(S-1)> <reward> <cost>     one line per (h, s, a)
//
// Steps are 0-based. Reals are written with 17 significant digits so a
// save/load cycle reproduces the environment bit for bit.

void write_environment(std::ostream& out, const Environment& env);
Environment read_environment(std::istream& in);

void save_environment(const std::filesystem::path& path, const Environment& env);
Environment load_environment(const std::filesystem::path& path);

}  // namespace lsviae
