#include "capreq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace capreq::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what)
{
    throw Error(Errc::ParseError, what);
}

std::vector<double> number_array(const json& j, const std::string& what)
{
    if (!j.is_array()) parse_fail(what + " must be an array");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) parse_fail(what + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Market parse_market(const json& j)
{
    if (!j.is_object() || !j.contains("probs") || !j.contains("filtration") || !j.contains("price"))
        parse_fail("market file needs probs, filtration and price");
    std::vector<double> probs = number_array(j["probs"], "probs");

    const json& filt = j["filtration"];
    if (!filt.is_array() || filt.empty() || !filt[0].is_array() || filt[0].size() != 1)
        parse_fail("filtration must start with the trivial partition");

    // outcome order = label order inside the first partition's single atom
    std::vector<std::string> labels;
    std::map<std::string, int> index_of;
    for (const auto& lab : filt[0][0]) {
        if (!lab.is_string()) parse_fail("outcome labels must be strings");
        std::string s = lab.get<std::string>();
        if (index_of.count(s)) parse_fail("duplicate outcome label " + s);
        index_of[s] = static_cast<int>(labels.size());
        labels.push_back(s);
    }

    std::vector<std::vector<std::vector<int>>> partitions;
    for (const auto& level : filt) {
        if (!level.is_array()) parse_fail("each filtration level must be an array of atoms");
        std::vector<std::vector<int>> part;
        for (const auto& atom : level) {
            if (!atom.is_array()) parse_fail("each atom must be an array of labels");
            std::vector<int> ids;
            for (const auto& lab : atom) {
                if (!lab.is_string()) parse_fail("outcome labels must be strings");
                auto it = index_of.find(lab.get<std::string>());
                if (it == index_of.end()) parse_fail("unknown outcome label " + lab.get<std::string>());
                ids.push_back(it->second);
            }
            part.push_back(std::move(ids));
        }
        partitions.push_back(std::move(part));
    }

    FiniteFilteredSpace space = build_space(std::move(probs), std::move(partitions), std::move(labels));

    const json& price_j = j["price"];
    if (!price_j.is_object()) parse_fail("price must be an object keyed t0..tT");
    PriceProcess price;
    price.values.resize(space.filtration.size());
    for (int t = 0; t <= space.horizon(); ++t) {
        std::string key = "t" + std::to_string(t);
        if (!price_j.contains(key)) parse_fail("price is missing key " + key);
        price.values[static_cast<std::size_t>(t)] = number_array(price_j[key], "price." + key);
    }
    price.normalized = j.value("normalized", false);
    try {
        return make_market(std::move(space), std::move(price));
    } catch (const Error& e) {
        if (e.code == Errc::SpaceMismatch) parse_fail(e.what());
        throw;
    }
}

Market load_market(const std::string& path)
{
    return parse_market(load_json_file(path));
}

json market_json(const Market& market)
{
    json j;
    j["probs"] = market.space.probs;
    json filt = json::array();
    for (const auto& part : market.space.filtration) {
        json level = json::array();
        for (const auto& atom : part) {
            json a = json::array();
            for (int w : atom) a.push_back(market.space.outcomes[static_cast<std::size_t>(w)]);
            level.push_back(a);
        }
        filt.push_back(level);
    }
    j["filtration"] = filt;
    json price;
    for (int t = 0; t <= market.space.horizon(); ++t)
        price["t" + std::to_string(t)] = market.price.values[static_cast<std::size_t>(t)];
    j["price"] = price;
    if (market.price.normalized) j["normalized"] = true;
    return j;
}

ScenarioSet parse_scenarios(const json& j, const FiniteFilteredSpace& space)
{
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        parse_fail("scenario file needs a generators array");
    std::vector<ScenarioGenerator> gens;
    for (const auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("density") || !g.contains("floor"))
            parse_fail("each generator needs density and floor");
        if (!g["floor"].is_number()) parse_fail("floor must be a number");
        gens.push_back({number_array(g["density"], "density"), g["floor"].get<double>()});
    }
    std::optional<double> cap;
    if (j.contains("norm_cap")) {
        if (!j["norm_cap"].is_number()) parse_fail("norm_cap must be a number");
        cap = j["norm_cap"].get<double>();
    }
    try {
        return make_scenario_set(space, std::move(gens), cap);
    } catch (const Error& e) {
        if (e.code == Errc::NotADensity || e.code == Errc::DimensionMismatch)
            parse_fail(e.what());
        throw;
    }
}

ScenarioSet load_scenarios(const std::string& path, const FiniteFilteredSpace& space)
{
    return parse_scenarios(load_json_file(path), space);
}

RandomVariable parse_claim(const json& j, const FiniteFilteredSpace& space)
{
    if (!j.is_object() || !j.contains("values")) parse_fail("claim file needs a values array");
    RandomVariable v = number_array(j["values"], "values");
    if (static_cast<int>(v.size()) != space.num_outcomes())
        parse_fail("claim length does not match the market outcome count");
    return v;
}

RandomVariable load_claim(const std::string& path, const FiniteFilteredSpace& space)
{
    return parse_claim(load_json_file(path), space);
}

json strategy_json(const TradingStrategy& strategy)
{
    json j;
    for (std::size_t t = 0; t < strategy.positions.size(); ++t)
        j["t" + std::to_string(t)] = strategy.positions[t];
    return j;
}

json capital_report_json(const CapitalReport& report)
{
    json j;
    j["status"] = capital_status_name(report.status);
    if (report.primal)
        j["primal"] = *report.primal;
    else
        j["primal"] = "unbounded";
    if (report.dual)
        j["dual"] = *report.dual;
    else
        j["dual"] = "empty";
    j["gap"] = report.gap;
    j["certificate_M"] = report.certificate_M;
    if (report.witness)
        j["witness"] = strategy_json(*report.witness);
    else
        j["witness"] = nullptr;
    j["note"] = report.note;
    j["seed"] = report.seed;
    return j;
}

json sweep_report_json(const TwoFactorModel& model, const HedgeProblem& base,
                       const std::vector<SweepRow>& rows, const HedgePriceResult* diag,
                       std::uint64_t seed)
{
    json j;
    j["model"] = {{"mu", model.mu},         {"sigma1", model.sigma1}, {"sigma2", model.sigma2},
                  {"sigma_star", model.sigma_star()}, {"steps", model.steps},
                  {"horizon", model.horizon}, {"s0", model.s0}};
    j["q"] = base.q;
    j["p"] = std::isinf(base.p) ? json("inf") : json(base.p);
    j["cap"] = base.cap;
    json rows_j = json::array();
    for (const auto& r : rows) {
        json row;
        row["alpha"] = r.alpha;
        if (r.status == "ok")
            row["price"] = r.price;
        else
            row["price"] = nullptr;
        row["status"] = r.status;
        rows_j.push_back(row);
    }
    j["rows"] = rows_j;
    if (diag) {
        j["diagnostics"] = {{"iterations", diag->iterations},
                            {"cap_active", diag->cap_active},
                            {"within_guarantee", diag->within_guarantee},
                            {"note", "optimum attained by a density of the finite tree"}};
    }
    j["seed"] = seed;
    return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "alpha,price,status\n";
    for (const auto& r : rows) {
        out += format_double(r.alpha);
        out += ',';
        if (r.status == "ok") out += format_double(r.price);
        out += ',';
        out += r.status;
        out += '\n';
    }
    return out;
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) parse_fail("cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) parse_fail("malformed JSON in " + path);
    return j;
}

void write_text_atomic(const std::string& path, const std::string& text)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::ParseError, "cannot write " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(Errc::ParseError, "cannot move report into place at " + path);
}

void write_json_atomic(const std::string& path, const json& j)
{
    write_text_atomic(path, j.dump(2) + "\n");
}

} // namespace capreq::io
