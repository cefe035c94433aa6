#include "lsviae/tabular_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "lsviae/error.hpp"

namespace lsviae {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line split into a stream.
  std::istringstream next(std::string_view expect_key = {}) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream fields(line);
      if (!expect_key.empty()) {
        std::string key;
        fields >> key;
        if (key != expect_key) fail(fmt::format("expected '{}', found '{}'", expect_key, key));
      }
      return fields;
    }
    fail(fmt::format("unexpected end of input (expected '{}')", expect_key));
  }

  template <typename T>
  T read(std::istringstream& fields, std::string_view what) {
    T value{};
    if (!(fields >> value)) fail(fmt::format("cannot parse {}", what));
    return value;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw InvalidArgument(fmt::format("environment file line {}: {}", line_no_, message));
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void write_environment(std::ostream& out, const Environment& env) {
  const TabularCmdp& m = env.cmdp;
  const FeatureMap& f = env.features;
  fmt::print(out, "# lsviae tabular cmdp\n");
  fmt::print(out, "dims {} {} {}\n", m.num_states(), m.num_actions(), f.dim());
  fmt::print(out, "horizon {}\n", m.horizon());
  fmt::print(out, "initial_state {}\n", m.initial_state());
  fmt::print(out, "reward_scale {:.17g}\n", m.reward_scale());
  if (m.cost_noise().kind == CostNoise::Kind::kGaussian) {
    fmt::print(out, "cost_noise gaussian {:.17g}\n", m.cost_noise().scale);
  } else {
    fmt::print(out, "cost_noise none\n");
  }
  fmt::print(out, "features\n");
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < m.num_actions(); ++a) {
      fmt::print(out, "{} {}", s, a);
      const auto phi = f(s, a);
      for (Eigen::Index i = 0; i < phi.size(); ++i) fmt::print(out, " {:.17g}", phi[i]);
      fmt::print(out, "\n");
    }
  }
  fmt::print(out, "entries\n");
  for (int h = 0; h < m.horizon(); ++h) {
    for (int s = 0; s < m.num_states(); ++s) {
      for (int a = 0; a < m.num_actions(); ++a) {
        fmt::print(out, "{} {} {}", h, s, a);
        for (double p : m.transition_row(h, s, a)) fmt::print(out, " {:.17g}", p);
        fmt::print(out, " {:.17g} {:.17g}\n", m.reward(h, s, a), m.cost(h, s, a));
      }
    }
  }
}

Environment read_environment(std::istream& in) {
  LineReader reader(in);
  auto dims = reader.next("dims");
  const int num_states = reader.read<int>(dims, "num_states");
  const int num_actions = reader.read<int>(dims, "num_actions");
  const int dim = reader.read<int>(dims, "feature_dim");
  auto horizon_line = reader.next("horizon");
  const int horizon = reader.read<int>(horizon_line, "horizon");
  if (num_states < 1 || num_actions < 1 || dim < 1 || horizon < 1) {
    reader.fail("dims and horizon must be positive");
  }

  Environment env{TabularCmdp(num_states, num_actions, horizon),
                  FeatureMap(num_states, num_actions, dim)};
  auto initial = reader.next("initial_state");
  env.cmdp.set_initial_state(reader.read<int>(initial, "initial_state"));
  auto scale = reader.next("reward_scale");
  env.cmdp.set_reward_scale(reader.read<double>(scale, "reward_scale"));
  auto noise = reader.next("cost_noise");
  const auto kind = reader.read<std::string>(noise, "cost_noise kind");
  if (kind == "gaussian") {
    env.cmdp.set_cost_noise(CostNoise::gaussian(reader.read<double>(noise, "noise scale")));
  } else if (kind != "none") {
    reader.fail(fmt::format("unknown cost_noise '{}'", kind));
  }

  reader.next("features");
  for (int i = 0; i < num_states * num_actions; ++i) {
    auto fields = reader.next();
    const int s = reader.read<int>(fields, "state");
    const int a = reader.read<int>(fields, "action");
    if (s < 0 || s >= num_states || a < 0 || a >= num_actions) reader.fail("feature index out of range");
    auto phi = env.features(s, a);
    for (int j = 0; j < dim; ++j) phi[j] = reader.read<double>(fields, "feature value");
  }

  reader.next("entries");
  for (int i = 0; i < horizon * num_states * num_actions; ++i) {
    auto fields = reader.next();
    const int h = reader.read<int>(fields, "step");
    const int s = reader.read<int>(fields, "state");
    const int a = reader.read<int>(fields, "action");
    if (h < 0 || h >= horizon || s < 0 || s >= num_states || a < 0 || a >= num_actions) {
      reader.fail("entry index out of range");
    }
    for (double& p : env.cmdp.mutable_transition_row(h, s, a)) {
      p = reader.read<double>(fields, "transition probability");
    }
    env.cmdp.set_reward(h, s, a, reader.read<double>(fields, "reward"));
    env.cmdp.set_cost(h, s, a, reader.read<double>(fields, "cost"));
  }
  env.cmdp.validate();
  return env;
}

void save_environment(const std::filesystem::path& path, const Environment& env) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_environment(out, env);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

Environment load_environment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open environment file '{}'", path.string()));
  return read_environment(in);
}

}  // namespace lsviae
