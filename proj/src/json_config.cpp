#include "dynet/json_config.hpp"

#include <sstream>

#include "dynet/errors.hpp"

namespace dynet {

json to_json(const ModelParams& p) {
    json j;
    j["lambda"] = p.lambda;
    j["mu"] = p.mu;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["version"] = to_string(p.version);
    return j;
}

json to_json(const SocialIndexDistribution& d) {
    json j;
    const auto& par = d.raw_params();
    switch (d.kind()) {
        case SocialIndexDistribution::Kind::constant:
            j["kind"] = "constant";
            j["s"] = par[0];
            break;
        case SocialIndexDistribution::Kind::two_point:
            j["kind"] = "two_point";
            j["s1"] = par[0];
            j["s2"] = par[1];
            j["p"] = par[2];
            break;
        case SocialIndexDistribution::Kind::exponential:
            j["kind"] = "exponential";
            j["rate"] = par[0];
            break;
        case SocialIndexDistribution::Kind::pareto:
            j["kind"] = "pareto";
            j["shape"] = par[0];
            j["scale"] = par[1];
            break;
        case SocialIndexDistribution::Kind::log_normal:
            j["kind"] = "log_normal";
            j["m"] = par[0];
            j["v"] = par[1];
            break;
    }
    return j;
}

json config_to_json(const ModelParams& p, const SocialIndexDistribution& d) {
    json j = to_json(p);
    j["social_index"] = to_json(d);
    return j;
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    try {
        p.lambda = j.at("lambda").get<double>();
        p.mu = j.at("mu").get<double>();
        p.alpha = j.at("alpha").get<double>();
        p.beta = j.at("beta").get<double>();
        std::string v = j.at("version").get<std::string>();
        if (v == "U")
            p.version = Version::U;
        else if (v == "P")
            p.version = Version::P;
        else
            throw InvalidConfig("version must be \"U\" or \"P\"");
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("bad params object: ") + e.what());
    }
    return p;
}

SocialIndexDistribution dist_from_json(const json& j) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "constant") return SocialIndexDistribution::constant(j.at("s").get<double>());
        if (kind == "two_point")
            return SocialIndexDistribution::two_point(j.at("s1").get<double>(),
                                                      j.at("s2").get<double>(),
                                                      j.at("p").get<double>());
        if (kind == "exponential")
            return SocialIndexDistribution::exponential(j.at("rate").get<double>());
        if (kind == "pareto")
            return SocialIndexDistribution::pareto(j.at("shape").get<double>(),
                                                   j.at("scale").get<double>());
        if (kind == "log_normal")
            return SocialIndexDistribution::log_normal(j.at("m").get<double>(),
                                                       j.at("v").get<double>());
        throw InvalidConfig("unknown social_index kind: " + kind);
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("bad social_index object: ") + e.what());
    }
}

SocialIndexDistribution dist_from_string(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::istringstream rest(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(rest, tok, ',')) {
            try {
                args.push_back(std::stod(tok));
            } catch (...) {
                throw InvalidConfig("bad numeric argument in social-index spec: " + spec);
            }
        }
    }
    auto need = [&](size_t n) {
        if (args.size() != n)
            throw InvalidConfig("social-index spec " + spec + " needs " + std::to_string(n) +
                                " arguments");
    };
    if (kind == "const" || kind == "constant") {
        need(1);
        return SocialIndexDistribution::constant(args[0]);
    }
    if (kind == "two_point" || kind == "twopoint") {
        need(3);
        return SocialIndexDistribution::two_point(args[0], args[1], args[2]);
    }
    if (kind == "exp" || kind == "exponential") {
        need(1);
        return SocialIndexDistribution::exponential(args[0]);
    }
    if (kind == "pareto") {
        need(2);
        return SocialIndexDistribution::pareto(args[0], args[1]);
    }
    if (kind == "lognormal" || kind == "log_normal") {
        need(2);
        return SocialIndexDistribution::log_normal(args[0], args[1]);
    }
    throw InvalidConfig("unknown social-index kind in spec: " + spec);
}

}  // namespace dynet
