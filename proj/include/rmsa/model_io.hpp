// Copyright 2026 The rmsa-bp Authors
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

// CPLEX-LP and free-MPS writers. The objective written is one stage of the
// model (stage 1 by default). Indicator rows use the CPLEX LP
// `g = 1 -> expr = rhs` syntax; MPS has no standard indicator section, so
// models must be linearized before MPS export.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rmsa/model.hpp"

namespace rmsa {

enum class ModelFormat { lp, mps };

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace model_io_detail {

inline const char* lp_sense(Sense s) {
  switch (s) {
    case Sense::less_equal: return "<=";
    case Sense::equal: return "=";
    case Sense::greater_equal: return ">=";
  }
  return "?";
}

// Writes `terms` wrapping every few terms; CPLEX LP caps line length.
inline void lp_expression(std::ostream& os, const IlpModel& model,
                          std::span<const Term> terms) {
  std::size_t on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
    const std::int64_t c = t.coefficient;
    if (first) {
      if (c < 0) os << " -";
    } else {
      os << (c < 0 ? " -" : " +");
    }
    const std::int64_t mag = c < 0 ? -c : c;
    os << " ";
    if (mag != 1) os << mag << " ";
    os << model.variable(t.var).name;
    first = false;
    ++on_line;
  }
}

inline void lp_row(std::ostream& os, const IlpModel& model,
                   const LinearConstraint& c) {
  if (c.terms.empty()) {
    // A constant row; emit it over a variable with coefficient 0 when
    // possible so readers keep the row.
    os << " " << c.name << ": 0 " << model.variable(0).name;
  } else {
    os << " " << c.name << ":";
    lp_expression(os, model, c.terms);
  }
  os << " " << lp_sense(c.sense) << " " << c.rhs << "\n";
}

}  // namespace model_io_detail

inline void write_lp(std::ostream& os, const IlpModel& model,
                     int stage_rank = 1) {
  using namespace model_io_detail;
  const ObjectiveStage& stage = model.stage(stage_rank);
  os << "\\ rmsa model, objective stage " << stage.rank << " (" << stage.label
     << ")\n";
  os << "\\ variables " << model.variables().size() << ", rows "
     << model.linear().size() << ", indicators " << model.indicators().size()
     << "\n";
  os << (stage.sense == ObjectiveSense::maximize ? "Maximize\n" : "Minimize\n");
  os << " obj:";
  if (!stage.expression.empty()) {
    lp_expression(os, model, stage.expression);
  } else if (!model.variables().empty()) {
    os << " 0 " << model.variable(0).name;
  }
  os << "\nSubject To\n";
  for (const LinearConstraint& c : model.linear()) {
    if (c.terms.empty() && model.variables().empty()) continue;
    lp_row(os, model, c);
  }
  for (const IndicatorConstraint& ind : model.indicators()) {
    os << " " << ind.body.name << ": " << model.variable(ind.guard).name
       << " = " << ind.guard_value << " ->";
    lp_expression(os, model, ind.body.terms);
    os << " " << lp_sense(ind.body.sense) << " " << ind.body.rhs << "\n";
  }
  os << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.is_binary()) continue;
    os << " " << v.lower << " <= " << v.name << " <= " << v.upper << "\n";
  }
  bool any = false;
  for (const Variable& v : model.variables()) {
    if (!v.is_binary()) continue;
    if (!any) os << "Binaries\n";
    any = true;
    os << " " << v.name << "\n";
  }
  any = false;
  for (const Variable& v : model.variables()) {
    if (v.is_binary()) continue;
    if (!any) os << "Generals\n";
    any = true;
    os << " " << v.name << "\n";
  }
  os << "End\n";
}

inline void write_mps(std::ostream& os, const IlpModel& model,
                      int stage_rank = 1) {
  if (!model.indicators().empty()) {
    throw ExportError(
        "MPS export cannot express indicator constraints; linearize first");
  }
  const ObjectiveStage& stage = model.stage(stage_rank);
  const std::size_t n = model.variables().size();

  // Column-wise nonzeros, objective first.
  std::vector<std::vector<std::pair<std::string, std::int64_t>>> columns(n);
  for (const Term& t : stage.expression) {
    columns[t.var].emplace_back("obj", t.coefficient);
  }
  for (const LinearConstraint& c : model.linear()) {
    for (const Term& t : c.terms) {
      columns[t.var].emplace_back(c.name, t.coefficient);
    }
  }

  os << "* rmsa model, objective stage " << stage.rank << " (" << stage.label
     << ")\n";
  os << "NAME rmsa\n";
  os << "OBJSENSE\n    "
     << (stage.sense == ObjectiveSense::maximize ? "MAX" : "MIN") << "\n";
  os << "ROWS\n N  obj\n";
  for (const LinearConstraint& c : model.linear()) {
    const char* t = c.sense == Sense::less_equal   ? "L"
                    : c.sense == Sense::equal ? "E"
                                              : "G";
    os << " " << t << "  " << c.name << "\n";
  }
  os << "COLUMNS\n";
  if (n > 0) os << "    MARKER  'MARKER'  'INTORG'\n";
  for (VarId v = 0; v < n; ++v) {
    const std::string& name = model.variable(v).name;
    if (columns[v].empty()) {
      os << "    " << name << "  obj  0\n";
    }
    for (const auto& [row, coef] : columns[v]) {
      os << "    " << name << "  " << row << "  " << coef << "\n";
    }
  }
  if (n > 0) os << "    MARKER  'MARKER'  'INTEND'\n";
  os << "RHS\n";
  for (const LinearConstraint& c : model.linear()) {
    if (c.rhs != 0) os << "    RHS  " << c.name << "  " << c.rhs << "\n";
  }
  os << "BOUNDS\n";
  for (const Variable& v : model.variables()) {
    if (v.is_binary()) {
      os << " BV BND  " << v.name << "\n";
    } else {
      os << " LI BND  " << v.name << "  " << v.lower << "\n";
      os << " UI BND  " << v.name << "  " << v.upper << "\n";
    }
  }
  os << "ENDATA\n";
}

inline void export_model(const IlpModel& model,
                         const std::filesystem::path& path, ModelFormat format,
                         int stage_rank = 1) {
  std::ostringstream buffer;
  if (format == ModelFormat::lp) {
    write_lp(buffer, model, stage_rank);
  } else {
    write_mps(buffer, model, stage_rank);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot open " + path.string() + " for writing");
  out << buffer.str();
  if (!out) throw ExportError("write failed for " + path.string());
}

}  // namespace rmsa
