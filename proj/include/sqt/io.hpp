#pragma once

// Scenario configuration files and CSV emission.
//
// Config files are INI-style: one [section] per scenario, flat key = value
// pairs, all rates in units of gamma. Recognised keys:
//
//   C rho sigma gamma_E delta_bar delta_c_bar delta_2ph_bar r
//   mode = EIT | Raman | general
//   sweep_axis sweep_start sweep_stop sweep_count sweep_spacing = linear | log
//   track_optimal_conditions = true | false
//   n_atoms squeezed_quadrature_angle   (optional)

#include "sqt/params.hpp"
#include "sqt/spectra.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace sqt::io {

enum class Mode { EIT, Raman, General };

inline Mode parse_mode(const std::string& s)
{
    if (s == "EIT") return Mode::EIT;
    if (s == "Raman") return Mode::Raman;
    if (s == "general") return Mode::General;
    throw ValidationError("unknown mode '" + s + "' (expected EIT, Raman or general)");
}

inline std::string to_string(Mode m)
{
    switch (m) {
    case Mode::EIT: return "EIT";
    case Mode::Raman: return "Raman";
    case Mode::General: return "general";
    }
    return "?";
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::GammaE;
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    bool log_spacing = false;

    std::vector<double> grid() const
    {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            v[i] = log_spacing ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                               : start + f * (stop - start);
        }
        v.front() = start;
        v.back() = stop;
        return v;
    }
};

struct Scenario {
    std::string name;
    DimensionlessParams params;
    Mode mode = Mode::General;
    std::optional<SweepSpec> sweep;
    bool track_optimal_conditions = false;
    double n_atoms = kDefaultAtomNumber;
    double squeezed_quadrature_angle = 0.0;

    SystemParams system() const
    {
        SystemParams p = from_dimensionless(params, n_atoms);
        p.squeezed_quadrature_angle = squeezed_quadrature_angle;
        return p;
    }
};

inline void validate(const Scenario& s)
{
    if (s.sweep) {
        if (s.sweep->count < 2)
            throw ValidationError(s.name + ": sweep_count must be >= 2");
        if (s.sweep->log_spacing && !(s.sweep->start > 0.0 && s.sweep->stop > 0.0))
            throw ValidationError(s.name + ": log spacing needs positive endpoints");
    }
    if (s.mode == Mode::EIT && !s.sweep
        && (s.params.delta_bar != 0.0 || s.params.delta_c_bar != 0.0 || s.params.delta_2ph_bar != 0.0))
        throw ValidationError(s.name + ": EIT mode needs zero detunings");
    if (s.mode == Mode::Raman && s.params.delta_bar == 0.0)
        throw ValidationError(s.name + ": Raman mode needs a non-zero delta_bar");
    from_dimensionless(s.params, s.n_atoms);
}

inline std::vector<Scenario> parse_scenarios(std::istream& in)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }

    static const std::set<std::string> known{
        "C", "rho", "sigma", "gamma_E", "delta_bar", "delta_c_bar", "delta_2ph_bar", "r", "mode",
        "sweep_axis", "sweep_start", "sweep_stop", "sweep_count", "sweep_spacing",
        "track_optimal_conditions", "n_atoms", "squeezed_quadrature_angle"};

    std::vector<Scenario> out;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw ValidationError("config: key '" + section + "' outside a [scenario] section");
        for (const auto& [key, _] : body)
            if (!known.contains(key))
                throw ValidationError("config [" + section + "]: unknown key '" + key + "'");

        auto num = [&, &body = body, &section = section](const char* key, double def) {
            const auto text = body.get_optional<std::string>(key);
            if (!text)
                return def;
            double v = 0.0;
            const char* first = text->data();
            const char* last = first + text->size();
            auto [end, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || end != last)
                throw ValidationError("config [" + section + "]: " + key + " is not a number");
            return v;
        };

        Scenario s;
        s.name = section;
        s.params.C = num("C", 0.0);
        s.params.rho = num("rho", 1.0);
        s.params.sigma = num("sigma", 0.0);
        s.params.gamma_E = num("gamma_E", 0.0);
        s.params.delta_bar = num("delta_bar", 0.0);
        s.params.delta_c_bar = num("delta_c_bar", 0.0);
        s.params.delta_2ph_bar = num("delta_2ph_bar", 0.0);
        s.params.r = num("r", 0.0);
        s.n_atoms = num("n_atoms", kDefaultAtomNumber);
        s.squeezed_quadrature_angle = num("squeezed_quadrature_angle", 0.0);
        s.mode = parse_mode(body.get<std::string>("mode", "general"));

        const std::string track = body.get<std::string>("track_optimal_conditions", "false");
        if (track != "true" && track != "false")
            throw ValidationError("config [" + section + "]: track_optimal_conditions must be true or false");
        s.track_optimal_conditions = track == "true";

        if (auto axis = body.get_optional<std::string>("sweep_axis")) {
            SweepSpec sw;
            sw.axis = parse_axis(*axis);
            sw.start = num("sweep_start", 0.0);
            sw.stop = num("sweep_stop", 0.0);
            sw.count = static_cast<int>(num("sweep_count", 0.0));
            const std::string spacing = body.get<std::string>("sweep_spacing", "linear");
            if (spacing != "linear" && spacing != "log")
                throw ValidationError("config [" + section + "]: sweep_spacing must be linear or log");
            sw.log_spacing = spacing == "log";
            s.sweep = sw;
        }
        validate(s);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

/// Locale-independent, 12 significant digits; "nan" for undefined values.
inline std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, end);
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("nan"); }

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(const std::string& line) { os_ << "# " << line << '\n'; }

    void header(std::span<const std::string> cols) { row_strings(cols); }

    template <class... Cells>
    void row(const Cells&... cells)
    {
        std::vector<std::string> v{cell(cells)...};
        row_strings(v);
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }
    static std::string cell(double v) { return fmt(v); }
    static std::string cell(const std::optional<double>& v) { return fmt(v); }

    void row_strings(std::span<const std::string> v)
    {
        for (std::size_t i = 0; i < v.size(); ++i)
            os_ << (i ? "," : "") << v[i];
        os_ << '\n';
    }

    std::ostream& os_;
};

inline std::string describe(const DimensionlessParams& x)
{
    return "C=" + fmt(x.C) + " rho=" + fmt(x.rho) + " sigma=" + fmt(x.sigma) + " gamma_E=" + fmt(x.gamma_E)
           + " delta_bar=" + fmt(x.delta_bar) + " delta_c_bar=" + fmt(x.delta_c_bar)
           + " delta_2ph_bar=" + fmt(x.delta_2ph_bar) + " r=" + fmt(x.r);
}

} // namespace sqt::io
