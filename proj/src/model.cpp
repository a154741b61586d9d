// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/model.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fps {

namespace {

struct KindInfo {
    Block::Kind kind;
    const char* name;
};

constexpr KindInfo kKinds[] = {
    {Block::Kind::input, "Input"},   {Block::Kind::constant, "Constant"},   {Block::Kind::gain, "Gain"},
    {Block::Kind::sum, "Sum"},       {Block::Kind::product, "Product"},     {Block::Kind::div, "Div"},
    {Block::Kind::sqrt, "Sqrt"},     {Block::Kind::switch_, "Switch"},      {Block::Kind::unit_delay, "UnitDelay"},
    {Block::Kind::output, "Output"},
};

std::string join_issues(const std::vector<ModelIssue>& issues) {
    std::string out;
    for (const auto& i : issues) {
        if (!out.empty()) {
            out += "\n";
        }
        if (i.loc.line > 0) {
            out += std::to_string(i.loc.line) + ":" + std::to_string(i.loc.column) + ": ";
        }
        out += i.message;
    }
    return out;
}

bool is_ident(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return true;
}

bool is_number(const std::string& s) {
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    const long double v = std::strtold(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
}

struct Token {
    std::string text;
    int column;
};

// Splits "a, b ,c" (columns relative to the line).
std::vector<Token> split_args(const std::string& line, std::size_t from, std::size_t to) {
    std::vector<Token> out;
    std::size_t start = from;
    for (std::size_t i = from; i <= to; ++i) {
        if (i == to || line[i] == ',') {
            std::size_t a = start;
            std::size_t b = i;
            while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) {
                ++a;
            }
            while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) {
                --b;
            }
            out.push_back(Token{line.substr(a, b - a), static_cast<int>(a) + 1});
            start = i + 1;
        }
    }
    if (out.size() == 1 && out[0].text.empty()) {
        out.clear();
    }
    return out;
}

class Parser {
  public:
    Model run(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.erase(hash);
            }
            parse_line(line, lineno);
        }
        if (!issues_.empty()) {
            throw ModelError(issues_);
        }
        auto more = check_model(model_);
        if (!more.empty()) {
            throw ModelError(std::move(more));
        }
        return model_;
    }

  private:
    void issue(int line, int col, std::string msg) { issues_.push_back(ModelIssue{{line, col}, std::move(msg)}); }

    void parse_line(const std::string& line, int lineno) {
        std::size_t p = 0;
        while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) {
            ++p;
        }
        if (p == line.size()) {
            return;
        }
        const int col = static_cast<int>(p) + 1;
        if (line.compare(p, 8, "simulate") == 0 &&
            (p + 8 == line.size() || std::isspace(static_cast<unsigned char>(line[p + 8])))) {
            parse_simulate(line, p + 8, lineno, col);
            return;
        }
        const auto eq = line.find('=', p);
        if (eq == std::string::npos) {
            issue(lineno, col, "expected 'name = Block(...)'");
            return;
        }
        std::string name = line.substr(p, eq - p);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) {
            name.pop_back();
        }
        if (!is_ident(name)) {
            issue(lineno, col, "bad block name '" + name + "'");
            return;
        }
        std::size_t k = eq + 1;
        while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) {
            ++k;
        }
        const auto open = line.find('(', k);
        const auto close = line.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open) {
            issue(lineno, static_cast<int>(k) + 1, "expected 'Block(...)'");
            return;
        }
        for (std::size_t i = close + 1; i < line.size(); ++i) {
            if (!std::isspace(static_cast<unsigned char>(line[i]))) {
                issue(lineno, static_cast<int>(i) + 1, "unexpected text after ')'");
                return;
            }
        }
        std::string kind = line.substr(k, open - k);
        while (!kind.empty() && std::isspace(static_cast<unsigned char>(kind.back()))) {
            kind.pop_back();
        }
        Block b;
        b.name = name;
        b.loc = {lineno, col};
        bool known = false;
        for (const auto& ki : kKinds) {
            if (kind == ki.name) {
                b.kind = ki.kind;
                known = true;
            }
        }
        if (!known) {
            issue(lineno, static_cast<int>(k) + 1, "unknown block kind '" + kind + "'");
            return;
        }
        const auto args = split_args(line, open + 1, close);
        if (parse_args(b, args, lineno, static_cast<int>(k) + 1)) {
            model_.blocks.push_back(std::move(b));
        }
    }

    void parse_simulate(const std::string& line, std::size_t from, int lineno, int col) {
        if (seen_simulate_) {
            issue(lineno, col, "more than one 'simulate' line");
            return;
        }
        seen_simulate_ = true;
        std::istringstream in(line.substr(from));
        std::string kv;
        while (in >> kv) {
            const auto eq = kv.find('=');
            const std::string key = kv.substr(0, eq);
            const std::string val = eq == std::string::npos ? "" : kv.substr(eq + 1);
            if (key == "steps") {
                char* end = nullptr;
                const long n = std::strtol(val.c_str(), &end, 10);
                if (val.empty() || *end != '\0' || n < 1 || n > 1000000) {
                    issue(lineno, col, "steps must be a positive integer");
                } else {
                    model_.steps = static_cast<int>(n);
                }
            } else if (key == "precision") {
                auto p = parse_precision(val);
                if (!p) {
                    issue(lineno, col, "unknown precision '" + val + "'");
                } else {
                    model_.precision = *p;
                }
            } else {
                issue(lineno, col, "unknown simulate setting '" + key + "'");
            }
        }
    }

    bool number(const Token& t, int lineno, std::vector<std::string>& out) {
        if (!is_number(t.text)) {
            issue(lineno, t.column, "expected a number, got '" + t.text + "'");
            return false;
        }
        out.push_back(t.text);
        return true;
    }

    // name or name*N
    bool refs(const Token& t, int lineno, std::vector<Ref>& out) {
        std::string name = t.text;
        long count = 1;
        const auto star = t.text.find('*');
        if (star != std::string::npos) {
            name = t.text.substr(0, star);
            const std::string n = t.text.substr(star + 1);
            char* end = nullptr;
            count = std::strtol(n.c_str(), &end, 10);
            if (n.empty() || *end != '\0' || count < 1) {
                issue(lineno, t.column, "bad repetition count in '" + t.text + "'");
                return false;
            }
        }
        if (!is_ident(name)) {
            issue(lineno, t.column, "expected a block name, got '" + t.text + "'");
            return false;
        }
        for (long i = 0; i < count; ++i) {
            out.push_back(Ref{name, {lineno, t.column}});
        }
        return true;
    }

    bool single_ref(const Token& t, int lineno, std::vector<Ref>& out) {
        if (!is_ident(t.text)) {
            issue(lineno, t.column, "expected a block name, got '" + t.text + "'");
            return false;
        }
        out.push_back(Ref{t.text, {lineno, t.column}});
        return true;
    }

    // "++-", "1030+", "2+1-"
    bool signs(const Token& t, int lineno, std::string& out) {
        std::size_t i = 0;
        const std::string& s = t.text;
        if (s.empty()) {
            issue(lineno, t.column, "expected a sign list");
            return false;
        }
        while (i < s.size()) {
            long count = 1;
            if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                char* end = nullptr;
                count = std::strtol(s.c_str() + i, &end, 10);
                i = static_cast<std::size_t>(end - s.c_str());
            }
            if (i >= s.size() || (s[i] != '+' && s[i] != '-') || count < 1) {
                issue(lineno, t.column, "bad sign list '" + s + "'");
                return false;
            }
            out.append(static_cast<std::size_t>(count), s[i]);
            ++i;
        }
        return true;
    }

    bool arity(const std::vector<Token>& args, std::size_t n, int lineno, int col, const char* kind) {
        if (args.size() != n) {
            issue(lineno, col,
                  std::string(kind) + " takes " + std::to_string(n) + " arguments, got " + std::to_string(args.size()));
            return false;
        }
        return true;
    }

    bool parse_args(Block& b, const std::vector<Token>& a, int line, int col) {
        const char* kind = block_kind_name(b.kind);
        switch (b.kind) {
        case Block::Kind::input:
            return arity(a, 2, line, col, kind) && number(a[0], line, b.params) && number(a[1], line, b.params);
        case Block::Kind::constant: return arity(a, 1, line, col, kind) && number(a[0], line, b.params);
        case Block::Kind::gain:
            return arity(a, 2, line, col, kind) && number(a[0], line, b.params) && single_ref(a[1], line, b.inputs);
        case Block::Kind::sum: {
            if (a.size() < 2) {
                issue(line, col, "Sum takes a sign list and at least one input");
                return false;
            }
            if (!signs(a[0], line, b.signs)) {
                return false;
            }
            for (std::size_t i = 1; i < a.size(); ++i) {
                if (!refs(a[i], line, b.inputs)) {
                    return false;
                }
            }
            if (b.signs.size() != b.inputs.size()) {
                issue(line, a[0].column,
                      "Sum has " + std::to_string(b.signs.size()) + " signs but " + std::to_string(b.inputs.size()) +
                          " inputs");
                return false;
            }
            return true;
        }
        case Block::Kind::product: {
            for (const auto& t : a) {
                if (!refs(t, line, b.inputs)) {
                    return false;
                }
            }
            if (b.inputs.size() < 2) {
                issue(line, col, "Product takes at least two inputs");
                return false;
            }
            return true;
        }
        case Block::Kind::div:
            return arity(a, 2, line, col, kind) && single_ref(a[0], line, b.inputs) && single_ref(a[1], line, b.inputs);
        case Block::Kind::sqrt:
        case Block::Kind::output: return arity(a, 1, line, col, kind) && single_ref(a[0], line, b.inputs);
        case Block::Kind::switch_: {
            if (!arity(a, 5, line, col, kind) || !single_ref(a[0], line, b.inputs)) {
                return false;
            }
            const std::string& c = a[1].text;
            if (c == ">=") {
                b.cmp = Cmp::ge;
            } else if (c == ">") {
                b.cmp = Cmp::gt;
            } else if (c == "!=" || c == "~=") {
                b.cmp = Cmp::ne;
            } else {
                issue(line, a[1].column, "Switch criterion must be >=, > or !=, got '" + c + "'");
                return false;
            }
            return number(a[2], line, b.params) && single_ref(a[3], line, b.inputs) && single_ref(a[4], line, b.inputs);
        }
        case Block::Kind::unit_delay:
            return arity(a, 2, line, col, kind) && number(a[0], line, b.params) && single_ref(a[1], line, b.inputs);
        }
        return false;
    }

    Model model_;
    std::vector<ModelIssue> issues_;
    bool seen_simulate_ = false;
};

bool is_source(Block::Kind k) { return k == Block::Kind::input || k == Block::Kind::unit_delay; }

// Blocks other than sources in an order where every wire is computed before
// it is read. Reports delay-free cycles.
std::vector<std::size_t> dependency_order(const Model& m, std::vector<ModelIssue>* issues) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        index.emplace(m.blocks[i].name, i);
    }
    enum class Mark { none, active, done };
    std::vector<Mark> mark(m.blocks.size(), Mark::none);
    std::vector<std::size_t> order;
    std::vector<std::size_t> path;
    bool cycle_reported = false;

    auto visit = [&](auto&& self, std::size_t i) -> void {
        if (mark[i] == Mark::done || is_source(m.blocks[i].kind)) {
            mark[i] = Mark::done;
            return;
        }
        if (mark[i] == Mark::active) {
            if (issues != nullptr && !cycle_reported) {
                std::string msg = "delay-free cycle: ";
                bool on = false;
                for (std::size_t j : path) {
                    on = on || j == i;
                    if (on) {
                        msg += m.blocks[j].name + " -> ";
                    }
                }
                msg += m.blocks[i].name;
                issues->push_back(ModelIssue{m.blocks[i].loc, msg});
                cycle_reported = true;
            }
            return;
        }
        mark[i] = Mark::active;
        path.push_back(i);
        for (const auto& r : m.blocks[i].inputs) {
            auto it = index.find(r.name);
            if (it != index.end()) {
                self(self, it->second);
            }
        }
        path.pop_back();
        mark[i] = Mark::done;
        order.push_back(i);
    };
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        visit(visit, i);
    }
    return order;
}

std::string compress_signs(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) {
            ++j;
        }
        const std::size_t n = j - i;
        if (n >= 3) {
            out += std::to_string(n) + s[i];
        } else {
            out.append(n, s[i]);
        }
        i = j;
    }
    return out;
}

std::string compress_refs(const std::vector<Ref>& refs) {
    std::string out;
    for (std::size_t i = 0; i < refs.size();) {
        std::size_t j = i;
        while (j < refs.size() && refs[j].name == refs[i].name) {
            ++j;
        }
        out += (out.empty() ? "" : ", ") + refs[i].name;
        if (j - i > 1) {
            out += "*" + std::to_string(j - i);
        }
        i = j;
    }
    return out;
}

} // namespace

const char* block_kind_name(Block::Kind k) {
    for (const auto& ki : kKinds) {
        if (ki.kind == k) {
            return ki.name;
        }
    }
    return "?";
}

const Block* Model::find(const std::string& name) const {
    for (const auto& b : blocks) {
        if (b.name == name) {
            return &b;
        }
    }
    return nullptr;
}

ModelError::ModelError(std::vector<ModelIssue> issues) : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Model parse_model(std::string_view text) {
    Parser p;
    return p.run(text);
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ModelError({ModelIssue{{}, "cannot open '" + path + "'"}});
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::vector<ModelIssue> check_model(const Model& m) {
    std::vector<ModelIssue> issues;
    std::set<std::string> names;
    for (const auto& b : m.blocks) {
        if (!names.insert(b.name).second) {
            issues.push_back(ModelIssue{b.loc, "block '" + b.name + "' is defined twice"});
        }
    }
    bool output = false;
    for (const auto& b : m.blocks) {
        output = output || b.kind == Block::Kind::output;
        for (const auto& r : b.inputs) {
            const Block* src = m.find(r.name);
            if (src == nullptr) {
                issues.push_back(ModelIssue{r.loc, "unknown block '" + r.name + "'"});
            } else if (src->kind == Block::Kind::output) {
                issues.push_back(ModelIssue{r.loc, "output block '" + r.name + "' cannot feed other blocks"});
            }
        }
    }
    if (!output) {
        issues.push_back(ModelIssue{{}, "no output block"});
    }
    dependency_order(m, &issues);
    return issues;
}

std::string print_model(const Model& m) {
    std::ostringstream os;
    os << "simulate steps=" << m.steps << " precision=" << precision_name(m.precision) << "\n";
    for (const auto& b : m.blocks) {
        os << b.name << " = " << block_kind_name(b.kind) << "(";
        switch (b.kind) {
        case Block::Kind::input: os << b.params[0] << ", " << b.params[1]; break;
        case Block::Kind::constant: os << b.params[0]; break;
        case Block::Kind::gain:
        case Block::Kind::unit_delay: os << b.params[0] << ", " << b.inputs[0].name; break;
        case Block::Kind::sum: os << compress_signs(b.signs) << ", " << compress_refs(b.inputs); break;
        case Block::Kind::product: os << compress_refs(b.inputs); break;
        case Block::Kind::div: os << b.inputs[0].name << ", " << b.inputs[1].name; break;
        case Block::Kind::sqrt:
        case Block::Kind::output: os << b.inputs[0].name; break;
        case Block::Kind::switch_:
            os << b.inputs[0].name << ", " << cmp_name(b.cmp) << ", " << b.params[0] << ", " << b.inputs[1].name << ", "
               << b.inputs[2].name;
            break;
        }
        os << ")\n";
    }
    return os.str();
}

bool structurally_equal(const Model& a, const Model& b) {
    if (a.steps != b.steps || a.precision != b.precision || a.blocks.size() != b.blocks.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const Block& x = a.blocks[i];
        const Block& y = b.blocks[i];
        if (x.kind != y.kind || x.name != y.name || x.params != y.params || x.signs != y.signs ||
            x.inputs.size() != y.inputs.size()) {
            return false;
        }
        if (x.kind == Block::Kind::switch_ && x.cmp != y.cmp) {
            return false;
        }
        for (std::size_t j = 0; j < x.inputs.size(); ++j) {
            if (x.inputs[j].name != y.inputs[j].name) {
                return false;
            }
        }
    }
    return true;
}

Program lower_to_program(const Model& m) {
    std::vector<ModelIssue> issues;
    const auto order = dependency_order(m, &issues);
    if (!issues.empty()) {
        throw ModelError(std::move(issues));
    }
    Program p;
    p.precision = m.precision;
    p.steps = m.steps;
    for (const auto& b : m.blocks) {
        if (b.kind == Block::Kind::input) {
            p.inputs.push_back(InputDecl{b.name, b.params[0], b.params[1]});
        } else if (b.kind == Block::Kind::unit_delay) {
            p.states.push_back(StateDecl{b.name, b.params[0], b.inputs[0].name});
        }
    }
    auto wire = [](const Ref& r) { return Expr::var(r.name); };
    for (std::size_t i : order) {
        const Block& b = m.blocks[i];
        const SourceLoc loc = b.loc;
        switch (b.kind) {
        case Block::Kind::constant: p.body.push_back(Instr::assign(b.name, Expr::literal(b.params[0]), loc)); break;
        case Block::Kind::gain:
            p.body.push_back(Instr::assign(b.name, wire(b.inputs[0]) * Expr::literal(b.params[0]), loc));
            break;
        case Block::Kind::sum: {
            ExprPtr e = b.signs[0] == '-' ? Expr::neg(wire(b.inputs[0])) : wire(b.inputs[0]);
            for (std::size_t k = 1; k < b.inputs.size(); ++k) {
                e = b.signs[k] == '-' ? e - wire(b.inputs[k]) : e + wire(b.inputs[k]);
            }
            p.body.push_back(Instr::assign(b.name, e, loc));
            break;
        }
        case Block::Kind::product: {
            ExprPtr e = wire(b.inputs[0]);
            for (std::size_t k = 1; k < b.inputs.size(); ++k) {
                e = e * wire(b.inputs[k]);
            }
            p.body.push_back(Instr::assign(b.name, e, loc));
            break;
        }
        case Block::Kind::div:
            p.body.push_back(Instr::assign(b.name, wire(b.inputs[0]) / wire(b.inputs[1]), loc));
            break;
        case Block::Kind::sqrt: p.body.push_back(Instr::assign(b.name, Expr::sqrt(wire(b.inputs[0])), loc)); break;
        case Block::Kind::switch_:
            p.body.push_back(Instr::guard(wire(b.inputs[0]), b.cmp, b.params[0],
                                          {Instr::assign(b.name, wire(b.inputs[1]), loc)},
                                          {Instr::assign(b.name, wire(b.inputs[2]), loc)}, loc));
            break;
        case Block::Kind::output:
            p.body.push_back(Instr::assign(b.name, wire(b.inputs[0]), loc));
            p.outputs.push_back(b.name);
            break;
        case Block::Kind::input:
        case Block::Kind::unit_delay: break;
        }
    }
    p.finalize();
    return p;
}

} // namespace fps
