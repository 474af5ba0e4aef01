// Copyright 2026 The dfs-cavity-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dfsim/export.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dfsim {
namespace {

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) out.push_back(',');
    out += c;
    first = false;
  }
  out.push_back('\n');
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0 so files do not depend on rounding signs
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dfs_basis_csv(const DfsBasis& basis) {
  std::string out = "vector_index,flat_basis_index,re_amplitude,im_amplitude\n";
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const CVector& v = basis.vectors[k].amplitudes;
    for (Index i = 0; i < v.size(); ++i) {
      if (v[i] == Complex{}) continue;
      append_row(out, {std::to_string(k), std::to_string(i), format_double(v[i].real()),
                       format_double(v[i].imag())});
    }
  }
  return out;
}

Json dfs_basis_sidecar(const HilbertSpace& space, const DfsBasis& basis) {
  Json j;
  j["n_atoms"] = space.n_atoms();
  j["n_max"] = space.n_max();
  j["hilbert_dimension"] = space.dim();
  j["ordering"] = "flat = photon_number * 2^N + atomic_config; bit i-1 set iff atom i excited";
  j["dimension"] = basis.size();
  j["expected_dimension"] = dfs_dimension(space.n_atoms());

  Json sectors = Json::array();
  int last = -1;
  for (const SectorLabel& label : basis.labels) {
    if (label.excitations == last) {
      sectors.back()["count"] = sectors.back()["count"].get<int>() + 1;
      continue;
    }
    last = label.excitations;
    sectors.push_back({{"excitations", label.excitations},
                       {"l", label.l},
                       {"degeneracy", dicke_degeneracy(space.n_atoms(), label.l)},
                       {"count", 1}});
  }
  j["sectors"] = sectors;

  Json vectors = Json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    vectors.push_back({{"vector_index", k},
                       {"excitations", basis.labels[k].excitations},
                       {"l", basis.labels[k].l}});
  }
  j["vectors"] = vectors;
  return j;
}

std::string trajectory_csv(const std::vector<Trajectory>& trajectories) {
  std::string out = "trajectory_id,jump_time,channel\n";
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    for (const Jump& jump : trajectories[k].jumps) {
      append_row(out, {std::to_string(k), format_double(jump.time), jump.channel.label()});
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "omega1_over_g,gamma_over_g,T_g,p0_numeric,p0_analytic,fidelity_conditional,"
      "fidelity_no_detection\n";
  for (const SweepRow& r : rows) {
    append_row(out, {format_double(r.omega1_over_g), format_double(r.gamma_over_g),
                     format_double(r.t_g), format_double(r.p0_numeric),
                     format_double(r.p0_analytic), format_double(r.fidelity_conditional),
                     format_double(r.fidelity_no_detection)});
  }
  return out;
}

std::string numeric_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out.push_back(',');
    out += header[k];
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("CSV row width mismatch");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out.push_back(',');
      out += format_double(row[k]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace dfsim
