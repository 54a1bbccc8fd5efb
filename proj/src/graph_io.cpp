#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include "tsnet/csv_io.hpp"
#include "tsnet/error.hpp"
#include "tsnet/graph.hpp"

namespace tsnet {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xml_unescape(const std::string& s) {
  static const std::pair<const char*, char> entities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t k = 0; k < s.size();) {
    bool matched = false;
    if (s[k] == '&') {
      for (const auto& [entity, c] : entities) {
        const std::string_view e(entity);
        if (s.compare(k, e.size(), e) == 0) {
          out += c;
          k += e.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out += s[k++];
  }
  return out;
}

}  // namespace

void export_edgelist(const Network& net, std::ostream& out) {
  for (const auto& l : net.labels()) {
    if (l.find_first_of("\t\n\r") != std::string::npos) {
      invalid_argument("node label '" + l + "' contains a tab or newline");
    }
  }
  out << "source\ttarget" << (net.weighted() ? "\tweight" : "") << '\n';
  for (const auto& e : net.edges()) {
    out << net.labels()[e.source] << '\t' << net.labels()[e.target];
    if (net.weighted()) out << '\t' << format_double(e.weight);
    out << '\n';
  }
}

void export_edgelist(const Network& net, const fs::path& path) {
  auto out = open_output(path);
  export_edgelist(net, out);
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

Network import_edgelist(std::istream& in, bool directed, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, source_name + ": empty edge list");
  const auto header = split_tabs(line);
  const bool weighted = header == std::vector<std::string>{"source", "target", "weight"};
  if (!weighted && header != std::vector<std::string>{"source", "target"}) {
    fail(ErrorKind::io, source_name + ": expected header 'source<TAB>target[<TAB>weight]'");
  }
  std::vector<std::string> labels;
  std::map<std::string, std::size_t> index;
  std::vector<std::tuple<std::size_t, std::size_t, double>> rows;
  auto node = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_tabs(line);
    const std::string ctx = source_name + " line " + std::to_string(row);
    if (f.size() != header.size()) fail(ErrorKind::io, ctx + ": wrong number of fields");
    const std::size_t u = node(f[0]);
    const std::size_t v = node(f[1]);
    rows.emplace_back(u, v, weighted ? parse_double(f[2], ctx) : 1.0);
  }
  bool loops = false;
  for (const auto& [u, v, w] : rows) loops = loops || u == v;
  Network net(labels, directed, weighted, loops);
  for (const auto& [u, v, w] : rows) {
    if (!net.add_edge(u, v, w)) {
      fail(ErrorKind::io, source_name + ": duplicate edge " + labels[u] + " - " + labels[v]);
    }
  }
  return net;
}

Network import_edgelist(const fs::path& path, bool directed) {
  auto in = open_input(path);
  return import_edgelist(in, directed, path.string());
}

void export_graphml(const Network& net, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
         "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
         "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  if (net.weighted()) {
    out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  }
  out << "  <graph id=\"G\" edgedefault=\"" << (net.directed() ? "directed" : "undirected") << "\">\n";
  for (const auto& l : net.labels()) out << "    <node id=\"" << xml_escape(l) << "\"/>\n";
  for (const auto& e : net.edges()) {
    out << "    <edge source=\"" << xml_escape(net.labels()[e.source]) << "\" target=\""
        << xml_escape(net.labels()[e.target]) << "\"";
    if (net.weighted()) {
      out << "><data key=\"weight\">" << format_double(e.weight) << "</data></edge>\n";
    } else {
      out << "/>\n";
    }
  }
  out << "  </graph>\n</graphml>\n";
}

void export_graphml(const Network& net, const fs::path& path) {
  auto out = open_output(path);
  export_graphml(net, out);
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

Network import_graphml(std::istream& in, const std::string& source_name) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  static const std::regex graph_re(R"re(<graph\b[^>]*\bedgedefault="(directed|undirected)")re");
  static const std::regex key_re(R"re(<key\b[^>]*\battr\.name="weight")re");
  static const std::regex node_re(R"re(<node\b[^>]*\bid="([^"]*)")re");
  static const std::regex edge_re(
      R"re(<edge\b[^>]*\bsource="([^"]*)"[^>]*\btarget="([^"]*)"[^>]*?(/>|>\s*<data\b[^>]*>([^<]*)</data>\s*</edge>))re");
  std::smatch m;
  if (!std::regex_search(text, m, graph_re)) fail(ErrorKind::io, source_name + ": no <graph> element");
  const bool directed = m[1] == "directed";
  const bool weighted = std::regex_search(text, key_re);

  std::vector<std::string> labels;
  std::map<std::string, std::size_t> index;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), node_re); it != std::sregex_iterator(); ++it) {
    const std::string label = xml_unescape((*it)[1]);
    if (!index.emplace(label, labels.size()).second) fail(ErrorKind::io, source_name + ": duplicate node " + label);
    labels.push_back(label);
  }
  std::vector<std::tuple<std::size_t, std::size_t, double>> rows;
  bool loops = false;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), edge_re); it != std::sregex_iterator(); ++it) {
    const auto& e = *it;
    auto u = index.find(xml_unescape(e[1]));
    auto v = index.find(xml_unescape(e[2]));
    if (u == index.end() || v == index.end()) fail(ErrorKind::io, source_name + ": edge references an unknown node");
    double w = 1.0;
    if (weighted) {
      if (!e[4].matched) fail(ErrorKind::io, source_name + ": weighted edge without a weight");
      w = parse_double(e[4].str(), source_name);
    }
    loops = loops || u->second == v->second;
    rows.emplace_back(u->second, v->second, w);
  }
  Network net(labels, directed, weighted, loops);
  for (const auto& [u, v, w] : rows) {
    if (!net.add_edge(u, v, w)) fail(ErrorKind::io, source_name + ": duplicate edge");
  }
  return net;
}

Network import_graphml(const fs::path& path) {
  auto in = open_input(path);
  return import_graphml(in, path.string());
}

Network read_network(const fs::path& path, bool directed) {
  if (path.extension() == ".graphml") return import_graphml(path);
  return import_edgelist(path, directed);
}

bool same_labeled_graph(const Network& a, const Network& b) {
  if (a.directed() != b.directed() || a.weighted() != b.weighted()) return false;
  const std::set<std::string> la(a.labels().begin(), a.labels().end());
  const std::set<std::string> lb(b.labels().begin(), b.labels().end());
  if (la != lb || a.edge_count() != b.edge_count()) return false;
  auto labeled = [](const Network& n) {
    std::set<std::tuple<std::string, std::string, double>> out;
    for (const auto& e : n.edges()) {
      auto s = n.labels()[e.source];
      auto t = n.labels()[e.target];
      if (!n.directed() && t < s) std::swap(s, t);
      out.emplace(s, t, e.weight);
    }
    return out;
  };
  return labeled(a) == labeled(b);
}

}  // namespace tsnet
