#include "torusfactor/map_config.hpp"

#include <map>

#include "json.hpp"
#include "torusfactor/common.hpp"
#include "torusfactor/gallery.hpp"

namespace torusfactor {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("map definition lacks \"") + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw DomainError(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

Vec2 point(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw DomainError(std::string("\"") + key + "\" must be [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
}

double named_irrational(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v == "golden") return kGolden;
    if (v == "sqrt2m1") return kSilver;
    throw DomainError("unknown irrational name (use golden, sqrt2m1 or a number)");
}

CircleLift circle(const json& j) {
    std::string kind = field(j, "kind").get<std::string>();
    if (kind == "rigid") return CircleLift::rigid(number(j, "alpha"));
    if (kind == "denjoy") {
        double alpha = named_irrational(field(j, "alpha"));
        int order = j.value("order", 40);
        double mass = j.value("mass", 0.3);
        return build_denjoy(alpha, geometric_schedule(mass), order);
    }
    if (kind == "piecewise") {
        std::vector<Knot> knots;
        for (const json& k : field(j, "knots")) {
            if (!k.is_array() || k.size() != 2) throw DomainError("knots must be [x, y] pairs");
            knots.push_back({k[0].get<double>(), k[1].get<double>()});
        }
        return CircleLift::piecewise(std::move(knots));
    }
    throw DomainError("unknown circle map kind \"" + kind + "\"");
}

struct Parsed {
    TorusMap map;
    std::optional<Vec2> target;
};

Parsed torus(const json& j, const std::map<std::string, json>& defs, int depth) {
    if (depth > 16) throw DomainError("map definition nested too deeply");
    if (j.is_string()) {
        auto it = defs.find(j.get<std::string>());
        if (it == defs.end()) throw DomainError("undefined map name \"" + j.get<std::string>() + "\"");
        return torus(it->second, defs, depth + 1);
    }
    std::string kind = field(j, "kind").get<std::string>();
    if (kind == "rigid") {
        double a = number(j, "alpha"), b = number(j, "beta");
        int k = j.value("k", 0);
        return {TorusMap::rigid(a, b, k), k == 0 ? std::optional<Vec2>(Vec2{a, b}) : std::nullopt};
    }
    if (kind == "dehn") return {TorusMap::dehn_twist(field(j, "k").get<int>()), std::nullopt};
    if (kind == "product") {
        CircleLift g1 = circle(field(j, "g1")), g2 = circle(field(j, "g2"));
        std::optional<Vec2> t;
        if (g1.has_target() && g2.has_target()) t = Vec2{g1.alpha(), g2.alpha()};
        return {TorusMap::product(g1, g2), t};
    }
    if (kind == "suspension") {
        SuspensionSpec s = suspension_map(circle(field(j, "g1")), circle(field(j, "g2")));
        return {s.map, s.has_target ? std::optional<Vec2>(s.rotation_target) : std::nullopt};
    }
    if (kind == "disk-push") return {TorusMap::disk_push(point(j, "center0"), point(j, "center1"), number(j, "radius")), std::nullopt};
    if (kind == "composed") {
        std::map<std::string, json> scope = defs;
        if (j.contains("defs"))
            for (auto& [name, def] : j.at("defs").items()) scope[name] = def;
        std::vector<TorusMap> chain;
        for (const json& c : field(j, "chain")) chain.push_back(torus(c, scope, depth + 1).map);
        if (chain.empty()) throw DomainError("composed map needs a nonempty chain");
        return {TorusMap::compose(chain), std::nullopt};
    }
    if (kind == "gallery") {
        std::string id = field(j, "id").get<std::string>();
        if (id == "3.2" || id == "3.3") {
            GalleryExample ex = id == "3.2" ? example_unbounded_inessential() : example_fully_essential();
            return {ex.map, ex.suspension.rotation_target};
        }
        if (id == "rigid-suspension") {
            SuspensionSpec s = example_rigid_suspension();
            return {s.map, s.rotation_target};
        }
        throw DomainError("unknown gallery map \"" + id + "\" (use 3.2, 3.3, rigid-suspension)");
    }
    throw DomainError("unknown map kind \"" + kind + "\"");
}

json load(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

CircleLift parse_circle(const std::string& json_text) {
    try {
        return circle(load(json_text));
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad circle definition: ") + e.what());
    }
}

MapDefinition parse_map(const std::string& json_text) {
    json j = load(json_text);
    try {
        Parsed p = torus(j, {}, 0);
        return {p.map, j.dump(), p.target};
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad map definition: ") + e.what());
    }
}

}  // namespace torusfactor
