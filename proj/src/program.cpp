// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/program.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fps {

ExprPtr Expr::literal(std::string text) {
    auto e = std::make_shared<Expr>();
    e->op = Op::literal;
    e->text = std::move(text);
    return e;
}

ExprPtr Expr::var(std::string name) {
    auto e = std::make_shared<Expr>();
    e->op = Op::var;
    e->text = std::move(name);
    return e;
}

ExprPtr Expr::neg(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::neg;
    e->args = {std::move(a)};
    return e;
}

ExprPtr Expr::binary(Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->args = {std::move(a), std::move(b)};
    return e;
}

ExprPtr Expr::sqrt(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Op::sqrt;
    e->args = {std::move(a)};
    return e;
}

ExprPtr operator+(ExprPtr a, ExprPtr b) { return Expr::binary(Expr::Op::add, std::move(a), std::move(b)); }
ExprPtr operator-(ExprPtr a, ExprPtr b) { return Expr::binary(Expr::Op::sub, std::move(a), std::move(b)); }
ExprPtr operator*(ExprPtr a, ExprPtr b) { return Expr::binary(Expr::Op::mul, std::move(a), std::move(b)); }
ExprPtr operator/(ExprPtr a, ExprPtr b) { return Expr::binary(Expr::Op::div, std::move(a), std::move(b)); }

std::string to_string(const Expr& e) {
    switch (e.op) {
    case Expr::Op::literal:
    case Expr::Op::var: return e.text;
    case Expr::Op::neg: return "-(" + to_string(*e.args[0]) + ")";
    case Expr::Op::sqrt: return "sqrt(" + to_string(*e.args[0]) + ")";
    default: break;
    }
    const char* sym = e.op == Expr::Op::add ? " + " : e.op == Expr::Op::sub ? " - " : e.op == Expr::Op::mul ? " * " : " / ";
    return "(" + to_string(*e.args[0]) + sym + to_string(*e.args[1]) + ")";
}

const char* cmp_name(Cmp c) {
    switch (c) {
    case Cmp::ge: return ">=";
    case Cmp::gt: return ">";
    case Cmp::ne: return "!=";
    }
    return "?";
}

Instr Instr::assign(std::string var, ExprPtr e, SourceLoc loc) {
    Instr i;
    i.kind = Kind::assign;
    i.var = std::move(var);
    i.expr = std::move(e);
    i.loc = loc;
    return i;
}

Instr Instr::guard(ExprPtr lhs, Cmp cmp, std::string constant, std::vector<Instr> then_body,
                   std::vector<Instr> else_body, SourceLoc loc) {
    Instr i;
    i.kind = Kind::guard;
    i.expr = std::move(lhs);
    i.cmp = cmp;
    i.constant = std::move(constant);
    i.then_body = std::move(then_body);
    i.else_body = std::move(else_body);
    i.loc = loc;
    return i;
}

namespace {

void number_sites(std::vector<Instr>& body, int& next) {
    for (auto& i : body) {
        if (i.kind == Instr::Kind::guard) {
            i.site = next++;
            number_sites(i.then_body, next);
            number_sites(i.else_body, next);
        }
    }
}

std::string where(const SourceLoc& loc) {
    if (loc.line <= 0) {
        return "";
    }
    return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": ";
}

void check_reads(const Expr& e, const std::set<std::string>& bound, const SourceLoc& loc) {
    if (e.op == Expr::Op::var && bound.count(e.text) == 0) {
        throw ProgramError(where(loc) + "variable '" + e.text + "' is read before it is defined");
    }
    for (const auto& a : e.args) {
        check_reads(*a, bound, loc);
    }
}

// Returns the names the block defines.
std::set<std::string> check_block(const std::vector<Instr>& body, std::set<std::string> bound) {
    std::set<std::string> defined;
    for (const auto& i : body) {
        check_reads(*i.expr, bound, i.loc);
        if (i.kind == Instr::Kind::assign) {
            if (bound.count(i.var) != 0) {
                throw ProgramError(where(i.loc) + "variable '" + i.var + "' is defined twice");
            }
            bound.insert(i.var);
            defined.insert(i.var);
            continue;
        }
        const auto t = check_block(i.then_body, bound);
        const auto f = check_block(i.else_body, bound);
        if (t != f) {
            throw ProgramError(where(i.loc) + "both branches of a guard must define the same variables");
        }
        bound.insert(t.begin(), t.end());
        defined.insert(t.begin(), t.end());
    }
    return defined;
}

void collect_names(const std::vector<Instr>& body, std::vector<std::string>& out) {
    for (const auto& i : body) {
        if (i.kind == Instr::Kind::assign) {
            if (std::find(out.begin(), out.end(), i.var) == out.end()) {
                out.push_back(i.var);
            }
        } else {
            collect_names(i.then_body, out);
            collect_names(i.else_body, out);
        }
    }
}

void print_block(std::ostream& os, const std::vector<Instr>& body, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& i : body) {
        if (i.kind == Instr::Kind::assign) {
            os << pad << i.var << " := " << to_string(*i.expr) << "\n";
            continue;
        }
        os << pad << "if " << to_string(*i.expr) << " " << cmp_name(i.cmp) << " " << i.constant << " {\n";
        print_block(os, i.then_body, indent + 1);
        os << pad << "} else {\n";
        print_block(os, i.else_body, indent + 1);
        os << pad << "}\n";
    }
}

} // namespace

void Program::finalize() {
    int next = 0;
    number_sites(body, next);
}

int Program::guard_count() const {
    int n = 0;
    std::vector<const std::vector<Instr>*> todo{&body};
    while (!todo.empty()) {
        const auto* b = todo.back();
        todo.pop_back();
        for (const auto& i : *b) {
            if (i.kind == Instr::Kind::guard) {
                ++n;
                todo.push_back(&i.then_body);
                todo.push_back(&i.else_body);
            }
        }
    }
    return n;
}

void validate(const Program& p) {
    if (p.steps < 1) {
        throw ProgramError("the simulation needs at least one step");
    }
    std::set<std::string> bound;
    auto declare = [&](const std::string& name) {
        if (!bound.insert(name).second) {
            throw ProgramError("variable '" + name + "' is defined twice");
        }
    };
    for (const auto& in : p.inputs) {
        declare(in.name);
    }
    for (const auto& s : p.states) {
        declare(s.name);
    }
    const auto defined = check_block(p.body, bound);
    bound.insert(defined.begin(), defined.end());
    for (const auto& s : p.states) {
        if (bound.count(s.source) == 0) {
            throw ProgramError("state '" + s.name + "' is updated from unknown variable '" + s.source + "'");
        }
    }
    if (p.outputs.empty()) {
        throw ProgramError("no output block");
    }
    for (const auto& o : p.outputs) {
        if (bound.count(o) == 0) {
            throw ProgramError("output '" + o + "' is not defined");
        }
    }
}

std::vector<std::string> variable_names(const Program& p) {
    std::vector<std::string> out;
    for (const auto& in : p.inputs) {
        out.push_back(in.name);
    }
    for (const auto& s : p.states) {
        out.push_back(s.name);
    }
    collect_names(p.body, out);
    return out;
}

std::string to_string(const Program& p) {
    std::ostringstream os;
    os << "precision " << precision_name(p.precision) << ", " << p.steps << " steps\n";
    for (const auto& in : p.inputs) {
        os << "input " << in.name << " in [" << in.lo << ", " << in.hi << "]\n";
    }
    for (const auto& s : p.states) {
        os << "state " << s.name << " = " << s.init << " then " << s.source << "\n";
    }
    print_block(os, p.body, 0);
    os << "outputs";
    for (const auto& o : p.outputs) {
        os << " " << o;
    }
    os << "\n";
    return os.str();
}

} // namespace fps
