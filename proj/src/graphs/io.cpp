#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mgoc/error.hpp"
#include "mgoc/graphs/generators.hpp"

namespace mgoc::graphs {

using nlohmann::json;

MetricGraph parse_graph_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw ParseError("graph JSON: expected an object with 'vertices' and 'edges'");

    try {
        // Vertex ids may be arbitrary integers; they are renumbered in file order.
        std::map<long long, Index> index_of;
        std::vector<VertexType> types;
        std::vector<Point2> coords;
        bool all_coords = true;
        for (const auto& v : doc.at("vertices")) {
            const long long id = v.at("id").get<long long>();
            if (!index_of.emplace(id, static_cast<Index>(types.size())).second)
                throw ParseError("graph JSON: duplicate vertex id " + std::to_string(id));
            const std::string type = v.value("type", std::string("kirchhoff"));
            if (type == "dirichlet") types.push_back(VertexType::Dirichlet);
            else if (type == "kirchhoff") types.push_back(VertexType::Kirchhoff);
            else throw ParseError("graph JSON: unknown vertex type '" + type + "'");
            if (v.contains("x") && v.contains("y"))
                coords.push_back({v.at("x").get<double>(), v.at("y").get<double>()});
            else
                all_coords = false;
        }
        std::vector<Edge> edges;
        std::vector<double> lengths, weights;
        for (const auto& e : doc.at("edges")) {
            const long long u = e.at("u").get<long long>();
            const long long w = e.at("v").get<long long>();
            const auto iu = index_of.find(u), iw = index_of.find(w);
            if (iu == index_of.end() || iw == index_of.end())
                throw ParseError("graph JSON: edge references unknown vertex");
            edges.push_back({iu->second, iw->second});
            lengths.push_back(e.value("length", 1.0));
            weights.push_back(e.value("weight", 1.0));
        }
        std::optional<std::vector<Point2>> c;
        if (all_coords && !coords.empty()) c = std::move(coords);
        const auto n = static_cast<Index>(types.size());
        return {CombinatorialGraph(n, std::move(edges), std::move(weights), std::move(c)),
                std::move(lengths), std::move(types)};
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("graph JSON: ") + e.what());
    }
}

MetricGraph load_graph_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("graph JSON: cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph_json(ss.str());
}

std::string to_graph_json(const MetricGraph& g) {
    json doc;
    doc["vertices"] = json::array();
    const auto& coords = g.base().coordinates();
    for (Index v = 0; v < g.n_vertices(); ++v) {
        json jv{{"id", v},
                {"type", g.vertex_type(v) == VertexType::Dirichlet ? "dirichlet" : "kirchhoff"}};
        if (coords) {
            jv["x"] = (*coords)[v].x;
            jv["y"] = (*coords)[v].y;
        }
        doc["vertices"].push_back(jv);
    }
    doc["edges"] = json::array();
    for (Index e = 0; e < g.n_edges(); ++e)
        doc["edges"].push_back({{"u", g.edges()[e].tail},
                                {"v", g.edges()[e].head},
                                {"length", g.length(e)},
                                {"weight", g.base().edge_weights()[e]}});
    return doc.dump(2);
}

}  // namespace mgoc::graphs
