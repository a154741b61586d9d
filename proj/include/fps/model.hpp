// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fps/precision.hpp"
#include "fps/program.hpp"

namespace fps {

struct Ref {
    std::string name;
    SourceLoc loc;
};

// One block of a discrete-time block diagram. See docs/dsl.md.
struct Block {
    enum class Kind { input, constant, gain, sum, product, div, sqrt, switch_, unit_delay, output };

    Kind kind = Kind::constant;
    std::string name;
    SourceLoc loc;
    // Numeric literals as written: Input lo, hi; Constant value; Gain factor;
    // Switch threshold; UnitDelay initial value.
    std::vector<std::string> params;
    // Wires, repetitions expanded. Switch: control, then, else.
    std::vector<Ref> inputs;
    std::string signs; // Sum only, one sign per input
    Cmp cmp = Cmp::ge; // Switch only
};

const char* block_kind_name(Block::Kind k);

struct Model {
    std::vector<Block> blocks;
    int steps = 1;
    Precision precision = Precision::double_;

    [[nodiscard]] const Block* find(const std::string& name) const;
};

struct ModelIssue {
    SourceLoc loc;
    std::string message;
};

class ModelError : public std::runtime_error {
  public:
    explicit ModelError(std::vector<ModelIssue> issues);
    [[nodiscard]] const std::vector<ModelIssue>& issues() const { return issues_; }

  private:
    std::vector<ModelIssue> issues_;
};

// Parses and validates. Throws ModelError listing every problem found.
Model parse_model(std::string_view text);
Model load_model(const std::string& path);

// Canonical text; parse_model(print_model(m)) is structurally equal to m.
std::string print_model(const Model& m);

// Equality ignoring source locations.
bool structurally_equal(const Model& a, const Model& b);

// Validation on its own (parse_model already runs it).
std::vector<ModelIssue> check_model(const Model& m);

// The simulation-loop program: inputs and delays become declarations, the
// other blocks assignments in dependency order, switches guards.
Program lower_to_program(const Model& m);

} // namespace fps
