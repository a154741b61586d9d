// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fps/precision.hpp"

namespace fps {

struct SourceLoc {
    int line = 0;
    int column = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Arithmetic expression tree. Literals keep their source text so each
// precision profile can round them itself.
struct Expr {
    enum class Op { literal, var, neg, add, sub, mul, div, sqrt };

    Op op = Op::literal;
    std::string text; // literal text or variable name
    std::vector<ExprPtr> args;

    static ExprPtr literal(std::string text);
    static ExprPtr var(std::string name);
    static ExprPtr neg(ExprPtr a);
    static ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
    static ExprPtr sqrt(ExprPtr a);
};

ExprPtr operator+(ExprPtr a, ExprPtr b);
ExprPtr operator-(ExprPtr a, ExprPtr b);
ExprPtr operator*(ExprPtr a, ExprPtr b);
ExprPtr operator/(ExprPtr a, ExprPtr b);

std::string to_string(const Expr& e);

enum class Cmp { ge, gt, ne };

const char* cmp_name(Cmp c);

struct Instr {
    enum class Kind { assign, guard };

    Kind kind = Kind::assign;
    SourceLoc loc;
    // assign
    std::string var;
    ExprPtr expr;
    // guard: expr cmp constant
    Cmp cmp = Cmp::ge;
    std::string constant;
    std::vector<Instr> then_body;
    std::vector<Instr> else_body;
    int site = -1; // numbered in program order by finalize()

    static Instr assign(std::string var, ExprPtr e, SourceLoc loc = {});
    static Instr guard(ExprPtr lhs, Cmp cmp, std::string constant, std::vector<Instr> then_body,
                       std::vector<Instr> else_body, SourceLoc loc = {});
};

struct InputDecl {
    std::string name;
    std::string lo;
    std::string hi;
};

// A unit-delay state: read as `name` during a step, then set to the value of
// `source` once the step's outputs are computed.
struct StateDecl {
    std::string name;
    std::string init;
    std::string source;
};

// One simulation-loop body: inputs are read, `body` computes the outputs, the
// states are updated simultaneously.
struct Program {
    Precision precision = Precision::double_;
    int steps = 1;
    std::vector<InputDecl> inputs;
    std::vector<StateDecl> states;
    std::vector<Instr> body;
    std::vector<std::string> outputs;

    // Numbers the guard sites; call after building the body.
    void finalize();
    [[nodiscard]] int guard_count() const;
};

class ProgramError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Every read bound, no name defined twice, guard branches define the same
// fresh names. Throws ProgramError.
void validate(const Program& p);

// All variable names in definition order: inputs, states, then body
// assignments.
std::vector<std::string> variable_names(const Program& p);

std::string to_string(const Program& p);

} // namespace fps
