// Command-line front end: normal forms, evaluation, norm tables,
// verification suites, Lamperti decomposition and spatiality reports.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpcuntz/algebra.hpp"
#include "lpcuntz/algebra_text.hpp"
#include "lpcuntz/error.hpp"
#include "lpcuntz/pnorm.hpp"
#include "lpcuntz/reps.hpp"
#include "lpcuntz/spatial.hpp"
#include "lpcuntz/verify.hpp"

using namespace lpcuntz;
using nlohmann::json;

namespace
{
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    int d = 2;
    std::string p_text = "2";
    double p = 2.0;
    std::string kind = "leavitt";
    int level = -1;
    int nmax = 6;
    std::uint64_t seed = 0;
    double tol = 1e-3;
    std::string format = "pretty";
    std::string out;

    std::vector<std::string> elements;
    std::string rep = "interval";
    std::string rep2;
    std::string rep_file;
    std::vector<std::string> reps;
    std::string suite = "all";
    std::size_t atoms = 8;
    int cases = 200;
    std::string matrix_file;
};

double parse_p(std::string const& text)
{
    static std::regex const decimal(R"(^[0-9]+(\.[0-9]+)?$)");
    if (!std::regex_match(text, decimal))
        throw UsageError("--p must be a decimal literal, got '" + text + "'");
    double const p = std::stod(text);
    if (p < 1.0)
        throw UsageError("--p must be at least 1");
    return p;
}

AlgebraKind algebra_kind(RunConfig const& cfg)
{
    if (cfg.kind == "leavitt")
        return AlgebraKind::leavitt(cfg.d);
    if (cfg.kind == "cohn")
        return AlgebraKind::cohn(cfg.d);
    if (cfg.kind == "infinity")
        return AlgebraKind::infinity();
    throw UsageError("--kind must be leavitt, cohn or infinity");
}

// Representations of L_infinity elements act through L_2.
AlgebraKind rep_kind(RunConfig const& cfg)
{
    AlgebraKind const k = algebra_kind(cfg);
    return k.is_finite() ? k : AlgebraKind::leavitt(2);
}

Representation load_rep(RunConfig const& cfg, std::string const& name)
{
    if (!cfg.rep_file.empty() && name == cfg.rep)
    {
        std::ifstream in(cfg.rep_file);
        if (!in)
            throw Error("cannot open " + cfg.rep_file);
        return make_representation(json::parse(in));
    }
    return make_representation(shorthand_descriptor(name, rep_kind(cfg), cfg.p));
}

Element element_arg(RunConfig const& cfg, std::size_t i)
{
    if (cfg.elements.size() <= i)
        throw UsageError("missing element argument");
    return parse_element(cfg.elements[i], algebra_kind(cfg));
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string complex_text(Complex z)
{
    if (z.imag() == 0.0)
        return num(z.real());
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

class Output
{
  public:
    explicit Output(std::string const& path)
    {
        if (!path.empty())
        {
            file_.open(path);
            if (!file_)
                throw Error("cannot write " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

json level_json(int level, NormResult const& r, FiniteMeasureSpace const& src, double p)
{
    return {{"level", level},
            {"lower_bound", r.certified_lower},
            {"estimate", r.estimate},
            {"upper_bound", r.upper_bound},
            {"converged", r.converged},
            {"method", r.method},
            {"witness_norm", weighted_norm(r.witness, src.weights(), p)}};
}

json sequence_json(Representation const& rep, NormSequence const& seq)
{
    json levels = json::array();
    for (std::size_t i = 0; i < seq.levels.size(); ++i)
        levels.push_back(level_json(seq.levels[i], seq.results[i], rep.space(seq.levels[i]), rep.p()));
    return {{"representation", rep.descriptor()},
            {"levels", levels},
            {"nondecreasing", seq.nondecreasing},
            {"stabilized", seq.stabilized},
            {"stabilized_at", seq.stabilized_at},
            {"eps", seq.eps}};
}

//---------------------------------------------------------------------------//
// Subcommands
//---------------------------------------------------------------------------//

int cmd_nf(RunConfig const& cfg, std::ostream& os)
{
    Element const a = normal_form(element_arg(cfg, 0));
    if (cfg.format == "json")
        os << json{{"input", cfg.elements[0]}, {"normal_form", to_text(a)}, {"element", to_json(a)}}
                  .dump(2)
           << "\n";
    else
        os << to_text(a) << "\n";
    return 0;
}

int cmd_mul(RunConfig const& cfg, std::ostream& os)
{
    Element const a = mul(normal_form(element_arg(cfg, 0)), normal_form(element_arg(cfg, 1)));
    if (cfg.format == "json")
        os << json{{"left", cfg.elements[0]},
                   {"right", cfg.elements[1]},
                   {"product", to_text(a)},
                   {"element", to_json(a)}}
                  .dump(2)
           << "\n";
    else
        os << to_text(a) << "\n";
    return 0;
}

int cmd_eval(RunConfig const& cfg, std::ostream& os)
{
    Element const a = element_arg(cfg, 0);
    Representation const rep = load_rep(cfg, cfg.rep);
    int const level = cfg.level >= 0 ? cfg.level : min_level(a);
    OperatorMatrix const m = eval(rep, a, level);
    if (cfg.format == "json")
    {
        os << json{{"element", cfg.elements[0]},
                   {"p", cfg.p_text},
                   {"level", level},
                   {"representation", rep.descriptor()},
                   {"operator", to_json(m)}}
                  .dump(2)
           << "\n";
        return 0;
    }
    if (cfg.format == "csv")
    {
        os << "row,column,re,im\n";
        for (Eigen::Index y = 0; y < m.rows(); ++y)
        {
            for (Eigen::Index x = 0; x < m.cols(); ++x)
            {
                if (m.entries()(y, x) != 0.0)
                    os << y << "," << x << "," << num(m.entries()(y, x).real()) << ","
                       << num(m.entries()(y, x).imag()) << "\n";
            }
        }
        return 0;
    }
    os << rep.name() << " at p = " << cfg.p_text << ", level " << level << ": " << m.cols()
       << " -> " << m.rows() << " atoms\n";
    for (Eigen::Index y = 0; y < m.rows(); ++y)
    {
        for (Eigen::Index x = 0; x < m.cols(); ++x)
            os << (x ? " " : "") << complex_text(m.entries()(y, x));
        os << "\n";
    }
    return 0;
}

int cmd_norm(RunConfig const& cfg, std::ostream& os)
{
    Element const a = element_arg(cfg, 0);
    PowerOptions po;
    po.seed = cfg.seed;
    Representation const rep = load_rep(cfg, cfg.rep);
    NormSequence const seq = norm_sequence(rep, a, cfg.nmax, cfg.tol, po);
    std::optional<Representation> rep2;
    std::optional<NormSequence> seq2;
    if (!cfg.rep2.empty())
    {
        rep2 = load_rep(cfg, cfg.rep2);
        seq2 = norm_sequence(*rep2, a, cfg.nmax, cfg.tol, po);
    }

    if (cfg.format == "json")
    {
        json j = {{"element", cfg.elements[0]}, {"p", cfg.p_text}, {"seed", cfg.seed}};
        j["first"] = sequence_json(rep, seq);
        if (seq2)
        {
            j["second"] = sequence_json(*rep2, *seq2);
            json diff = json::array();
            for (std::size_t i = 0; i < seq.levels.size(); ++i)
                diff.push_back(std::abs(seq.results[i].estimate - seq2->results[i].estimate));
            j["difference"] = diff;
        }
        os << j.dump(2) << "\n";
        return 0;
    }
    if (cfg.format == "csv")
    {
        os << "level,lower_bound,converged,witness_norm";
        if (seq2)
            os << ",lower_bound_2,converged_2,witness_norm_2,difference";
        os << "\n";
        for (std::size_t i = 0; i < seq.levels.size(); ++i)
        {
            auto const lj = level_json(seq.levels[i], seq.results[i], rep.space(seq.levels[i]), rep.p());
            os << seq.levels[i] << "," << num(lj["lower_bound"].get<double>()) << ","
               << (seq.results[i].converged ? "true" : "false") << "," << num(lj["witness_norm"].get<double>());
            if (seq2)
            {
                auto const& r2 = seq2->results[i];
                auto const l2 = level_json(seq.levels[i], r2, rep2->space(seq.levels[i]), rep2->p());
                os << "," << num(l2["lower_bound"].get<double>()) << "," << (r2.converged ? "true" : "false")
                   << "," << num(l2["witness_norm"].get<double>()) << ","
                   << num(std::abs(seq.results[i].estimate - r2.estimate));
            }
            os << "\n";
        }
        return 0;
    }
    os << "norm of " << cfg.elements[0] << " under " << rep.name() << " at p = " << cfg.p_text
       << "\n";
    for (std::size_t i = 0; i < seq.levels.size(); ++i)
    {
        os << "  level " << seq.levels[i] << ": " << num(seq.results[i].certified_lower);
        if (seq2)
            os << "   " << rep2->name() << ": " << num(seq2->results[i].certified_lower)
               << "   difference " << num(std::abs(seq.results[i].estimate - seq2->results[i].estimate));
        os << (seq.results[i].converged ? "" : "  (not converged)") << "\n";
    }
    os << "  nondecreasing: " << (seq.nondecreasing ? "yes" : "no") << ", stabilized: "
       << (seq.stabilized ? "at level " + std::to_string(seq.stabilized_at) : std::string("no"))
       << " (eps " << num(seq.eps) << ")\n";
    return 0;
}

int cmd_verify(RunConfig const& cfg, std::ostream& os)
{
    VerifyOptions vo;
    vo.seed = cfg.seed;
    vo.atoms = cfg.atoms;
    vo.cases = cfg.cases;
    auto const results = run_suite(cfg.suite, vo);
    bool all = true;
    for (auto const& r : results)
        all = all && r.passed();
    if (cfg.format == "json")
    {
        json suites = json::array();
        for (auto const& r : results)
            suites.push_back(to_json(r));
        os << json{{"passed", all}, {"seed", cfg.seed}, {"suites", suites}}.dump(2) << "\n";
    }
    else if (cfg.format == "csv")
    {
        os << "suite,check,passed,measured,tolerance\n";
        for (auto const& r : results)
        {
            for (auto const& c : r.checks)
                os << r.suite << ",\"" << c.name << "\"," << (c.passed ? "true" : "false") << ","
                   << num(c.measured) << "," << num(c.tolerance) << "\n";
        }
    }
    else
    {
        for (auto const& r : results)
        {
            os << (r.passed() ? "PASS " : "FAIL ") << r.suite << "\n";
            for (auto const& c : r.checks)
            {
                os << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << "  [" << num(c.measured)
                   << " vs " << num(c.tolerance) << "]";
                if (!c.detail.empty())
                    os << "  " << c.detail;
                os << "\n";
            }
        }
    }
    return all ? 0 : 1;
}

int cmd_lamperti(RunConfig const& cfg, std::ostream& os, bool p_given)
{
    std::ifstream in(cfg.matrix_file);
    if (!in)
        throw Error("cannot open " + cfg.matrix_file);
    OperatorMatrix m = operator_from_json(json::parse(in));
    if (p_given)
        m = OperatorMatrix(m.source(), m.target(), cfg.p, m.entries());
    auto const det = detect(m);
    std::ostringstream p_echo;
    p_echo << m.p();
    std::string const p_out = p_given ? cfg.p_text : p_echo.str();
    if (cfg.format == "json")
    {
        json j = {{"accepted", det.accepted}, {"message", det.message}, {"p", p_out}};
        if (det.accepted)
        {
            j["spatial"] = det.spatial;
            j["system"] = to_json(*det.system);
            j["h"] = det.h;
        }
        if (det.witness)
            j["witness"] = {{"kind", det.witness->kind},
                            {"x1", m.source().label(det.witness->x1)},
                            {"x2", m.source().label(det.witness->x2)},
                            {"y", m.target().label(det.witness->y)},
                            {"value", det.witness->value},
                            {"expected", det.witness->expected}};
        os << j.dump(2) << "\n";
    }
    else
    {
        os << (det.accepted ? "accepted: " : "rejected: ") << det.message << "\n";
        if (det.accepted)
            os << to_json(*det.system).dump(2) << "\n";
    }
    return det.accepted ? 0 : 1;
}

std::vector<std::pair<std::string, Condition const*>> conditions(SpatialityReport const& r)
{
    return {{"contractive_on_generators", &r.contractive_on_generators},
            {"forward_isometric", &r.forward_isometric},
            {"strongly_forward_isometric", &r.strongly_forward_isometric},
            {"disjoint", &r.disjoint},
            {"spatial", &r.spatial},
            {"p_standard_on_s", &r.p_standard_on_s},
            {"p_standard_on_t", &r.p_standard_on_t},
            {"row_isometry", &r.row_isometry},
            {"md_restriction_spatial", &r.md_restriction_spatial}};
}

int cmd_report(RunConfig const& cfg, std::ostream& os)
{
    Representation const rep = load_rep(cfg, cfg.rep);
    ReportOptions ro;
    ro.level = cfg.level >= 0 ? cfg.level : 2;
    ro.seed = cfg.seed;
    auto const r = spatiality_report(rep, ro);
    if (cfg.format == "json")
    {
        json j = to_json(r);
        j["p"] = cfg.p_text;
        j["representation"] = rep.descriptor();
        os << j.dump(2) << "\n";
    }
    else if (cfg.format == "csv")
    {
        os << "condition,value,witness\n";
        for (auto const& [name, c] : conditions(r))
            os << name << "," << (c->value ? "true" : "false") << ",\"" << c->witness << "\"\n";
    }
    else
    {
        os << rep.name() << " at p = " << cfg.p_text << ", level " << r.level << "\n";
        for (auto const& [name, c] : conditions(r))
        {
            os << "  " << (c->value ? "yes " : "no  ") << name;
            if (!c->witness.empty())
                os << "  (" << c->witness << ")";
            os << "\n";
        }
        for (auto const& n : r.notes)
            os << "  note: " << n << "\n";
        for (auto const& f : r.audit_failures)
            os << "  audit failure: " << f << "\n";
    }
    return r.consistent() ? 0 : 1;
}

int cmd_compare(RunConfig const& cfg, std::ostream& os)
{
    Element const a = element_arg(cfg, 0);
    PowerOptions po;
    po.seed = cfg.seed;
    std::vector<std::pair<Representation, NormSequence>> rows;
    for (auto const& name : cfg.reps)
    {
        Representation rep = load_rep(cfg, name);
        NormSequence seq = norm_sequence(rep, a, cfg.nmax, cfg.tol, po);
        rows.emplace_back(std::move(rep), std::move(seq));
    }
    if (cfg.format == "json")
    {
        json list = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            json j = sequence_json(rows[i].first, rows[i].second);
            j["name"] = cfg.reps[i];
            list.push_back(std::move(j));
        }
        os << json{{"element", cfg.elements[0]}, {"p", cfg.p_text}, {"seed", cfg.seed}, {"representations", list}}
                  .dump(2)
           << "\n";
    }
    else if (cfg.format == "csv")
    {
        os << "rep,level,lower_bound,converged,witness_norm\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            auto const& [rep, seq] = rows[i];
            for (std::size_t k = 0; k < seq.levels.size(); ++k)
            {
                auto const lj = level_json(seq.levels[k], seq.results[k], rep.space(seq.levels[k]), rep.p());
                os << cfg.reps[i] << "," << seq.levels[k] << "," << num(lj["lower_bound"].get<double>()) << ","
                   << (seq.results[k].converged ? "true" : "false") << ","
                   << num(lj["witness_norm"].get<double>()) << "\n";
            }
        }
    }
    else
    {
        os << "norm profile of " << cfg.elements[0] << " at p = " << cfg.p_text << "\n";
        os << "  level";
        for (auto const& n : cfg.reps)
            os << "  " << n;
        os << "\n";
        auto const& levels = rows.front().second.levels;
        for (std::size_t k = 0; k < levels.size(); ++k)
        {
            os << "  " << levels[k];
            for (auto const& [rep, seq] : rows)
                os << "  " << num(seq.results[k].certified_lower);
            os << "\n";
        }
    }
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Computations in Leavitt algebras and their L^p representations"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("-d,--d", cfg.d, "number of generators")->check(CLI::Range(2, 64));
    auto* p_opt = app.add_option("--p", cfg.p_text, "exponent p as a decimal literal");
    app.add_option("--kind", cfg.kind, "leavitt, cohn or infinity");
    app.add_option("--level", cfg.level, "truncation level");
    app.add_option("--nmax", cfg.nmax, "largest level of a norm table");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--tol", cfg.tol, "stabilization tolerance of norm tables");
    app.add_option("--format", cfg.format, "json, csv or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    app.add_option("--out", cfg.out, "output file");

    auto* nf = app.add_subcommand("nf", "canonical form of an element");
    nf->add_option("element", cfg.elements)->required();
    auto* mulc = app.add_subcommand("mul", "canonical product of two elements");
    mulc->add_option("elements", cfg.elements)->required()->expected(2);
    auto* evalc = app.add_subcommand("eval", "matrix of an element on a level");
    evalc->add_option("element", cfg.elements)->required();
    evalc->add_option("--rep", cfg.rep, "representation name");
    evalc->add_option("--rep-file", cfg.rep_file, "representation descriptor JSON");
    auto* norm = app.add_subcommand("norm", "norm lower bounds by level");
    norm->add_option("element", cfg.elements)->required();
    norm->add_option("--rep", cfg.rep, "representation name");
    norm->add_option("--rep2", cfg.rep2, "second representation for comparison");
    norm->add_option("--rep-file", cfg.rep_file, "representation descriptor JSON");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", cfg.suite, "suite name or all");
    verify->add_option("--atoms", cfg.atoms, "largest space in the lamperti suite");
    verify->add_option("--cases", cfg.cases, "number of lamperti cases");
    auto* lamp = app.add_subcommand("lamperti", "decompose a matrix as a spatial system");
    lamp->add_option("matrix", cfg.matrix_file, "operator JSON file")->required();
    auto* report = app.add_subcommand("report-spatiality", "decide the spatiality conditions");
    report->add_option("--rep", cfg.rep, "representation name");
    report->add_option("--rep-file", cfg.rep_file, "representation descriptor JSON");
    auto* compare = app.add_subcommand("compare-reps", "norm profiles across representations");
    compare->add_option("element", cfg.elements)->required();
    compare->add_option("--reps", cfg.reps, "representation names")->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        cfg.p = parse_p(cfg.p_text);
        if (cfg.reps.empty())
            cfg.reps = {"interval", "sequence", "twist", "dblskew"};
        Output out(cfg.out);
        std::ostream& os = out.os();
        if (*nf)
            return cmd_nf(cfg, os);
        if (*mulc)
            return cmd_mul(cfg, os);
        if (*evalc)
            return cmd_eval(cfg, os);
        if (*norm)
            return cmd_norm(cfg, os);
        if (*verify)
            return cmd_verify(cfg, os);
        if (*lamp)
            return cmd_lamperti(cfg, os, p_opt->count() > 0);
        if (*report)
            return cmd_report(cfg, os);
        if (*compare)
            return cmd_compare(cfg, os);
    }
    catch (UsageError const& e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
    catch (ParseError const& e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    catch (InvalidArgument const& e)
    {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
