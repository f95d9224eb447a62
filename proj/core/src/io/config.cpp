#include "fgim/io/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "fgim/errors.hpp"

namespace fgim::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Thrown by value parsers; the caller adds location and key.
struct BadValue {
  std::string why;
};

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw BadValue{"'" + s + "' is not a number"};
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw BadValue{"'" + s + "' is not a non-negative integer"};
  }
  return v;
}

struct Key {
  std::string section;
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename Get>
Key size_key(std::string section, std::string name, Get ref, std::size_t min) {
  return {section, name, [ref](const RunConfig& c) { return std::to_string(ref(c)); },
          [ref, min](RunConfig& c, const std::string& v) {
            const auto n = parse_uint(v);
            if (n < min) throw BadValue{"must be at least " + std::to_string(min)};
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(n);
          }};
}

template <typename Get, typename Check>
Key real_key(std::string section, std::string name, Get ref, Check ok, std::string domain) {
  return {section, name, [ref](const RunConfig& c) { return format_double(ref(c)); },
          [ref, ok, domain](RunConfig& c, const std::string& v) {
            const auto x = parse_double(v);
            if (!ok(x)) throw BadValue{"must lie in " + domain};
            ref(c) = x;
          }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    auto positive = [](double x) { return x > 0.0; };
    std::vector<Key> k;
    k.push_back({"data", "dir", [](const RunConfig& c) { return c.data.dir; },
                 [](RunConfig& c, const std::string& v) { c.data.dir = v; }});
    k.push_back({"data", "layout", [](const RunConfig& c) { return text::layout_name(c.data.layout); },
                 [](RunConfig& c, const std::string& v) {
                   try {
                     c.data.layout = text::parse_layout(v);
                   } catch (const Error& e) {
                     throw BadValue{e.what()};
                   }
                 }});
    k.push_back({"data", "prefix", [](const RunConfig& c) { return c.data.prefix; },
                 [](RunConfig& c, const std::string& v) { c.data.prefix = v; }});
    k.push_back(size_key("data", "max_len", [](auto& c) -> auto& { return c.data.max_len; }, 1));
    k.push_back(size_key("data", "min_count", [](auto& c) -> auto& { return c.data.min_count; }, 1));
    k.push_back(size_key("data", "max_vocab", [](auto& c) -> auto& { return c.data.max_vocab; }, 5));
    k.push_back({"data", "output_dir", [](const RunConfig& c) { return c.data.output_dir; },
                 [](RunConfig& c, const std::string& v) { c.data.output_dir = v; }});

    k.push_back(size_key("ae", "embed_dim", [](auto& c) -> auto& { return c.ae.hp.embed_dim; }, 1));
    k.push_back(size_key("ae", "latent_dim", [](auto& c) -> auto& { return c.ae.hp.latent_dim; }, 2));
    k.push_back(size_key("ae", "attn_dim", [](auto& c) -> auto& { return c.ae.hp.attn_dim; }, 1));
    k.push_back(size_key("ae", "ffn_dim", [](auto& c) -> auto& { return c.ae.hp.ffn_dim; }, 1));
    k.push_back(size_key("ae", "gru_hidden", [](auto& c) -> auto& { return c.ae.hp.gru_hidden; }, 1));
    k.push_back(size_key("ae", "encoder_layers", [](auto& c) -> auto& { return c.ae.hp.encoder_layers; }, 1));
    k.push_back(size_key("ae", "decoder_layers", [](auto& c) -> auto& { return c.ae.hp.decoder_layers; }, 1));
    k.push_back(size_key("ae", "heads", [](auto& c) -> auto& { return c.ae.hp.heads; }, 1));
    k.push_back(size_key("ae", "max_len", [](auto& c) -> auto& { return c.ae.hp.max_len; }, 2));
    k.push_back(real_key("ae", "smoothing", [](auto& c) -> auto& { return c.ae.hp.smoothing; },
                         [](double x) { return x >= 0.0 && x < 1.0; }, "[0,1)"));
    k.push_back(real_key("ae", "dropout", [](auto& c) -> auto& { return c.ae.hp.dropout; },
                         [](double x) { return x >= 0.0 && x < 1.0; }, "[0,1)"));
    k.push_back(real_key("ae", "lr", [](auto& c) -> auto& { return c.ae.hp.lr; }, positive, "(0,inf)"));
    k.push_back(size_key("ae", "batch_size", [](auto& c) -> auto& { return c.ae.hp.batch_size; }, 1));
    k.push_back(size_key("ae", "epochs", [](auto& c) -> auto& { return c.ae.hp.epochs; }, 0));
    k.push_back(size_key("ae", "seed", [](auto& c) -> auto& { return c.ae.seed; }, 0));
    k.push_back({"ae", "precision", [](const RunConfig& c) { return std::string(c.ae.precision == Precision::f64 ? "64" : "32"); },
                 [](RunConfig& c, const std::string& v) {
                   if (v == "32") c.ae.precision = Precision::f32;
                   else if (v == "64") c.ae.precision = Precision::f64;
                   else throw BadValue{"must be 32 or 64"};
                 }});

    k.push_back(size_key("classifier", "hidden1", [](auto& c) -> auto& { return c.classifier.hp.hidden1; }, 1));
    k.push_back(size_key("classifier", "hidden2", [](auto& c) -> auto& { return c.classifier.hp.hidden2; }, 1));
    k.push_back({"classifier", "loss",
                 [](const RunConfig& c) {
                   return std::string(c.classifier.hp.loss == num::AttributeLoss::binary ? "binary" : "one_sided");
                 },
                 [](RunConfig& c, const std::string& v) {
                   if (v == "binary") c.classifier.hp.loss = num::AttributeLoss::binary;
                   else if (v == "one_sided") c.classifier.hp.loss = num::AttributeLoss::one_sided;
                   else throw BadValue{"must be binary or one_sided"};
                 }});
    k.push_back(real_key("classifier", "lr", [](auto& c) -> auto& { return c.classifier.hp.lr; }, positive,
                         "(0,inf)"));
    k.push_back(size_key("classifier", "batch_size", [](auto& c) -> auto& { return c.classifier.hp.batch_size; }, 1));
    k.push_back(size_key("classifier", "epochs", [](auto& c) -> auto& { return c.classifier.hp.epochs; }, 0));
    k.push_back(size_key("classifier", "seed", [](auto& c) -> auto& { return c.classifier.seed; }, 0));
    k.push_back(size_key("classifier", "eval_epochs", [](auto& c) -> auto& { return c.classifier.eval_epochs; }, 1));
    k.push_back(size_key("classifier", "eval_seed", [](auto& c) -> auto& { return c.classifier.eval_seed; }, 0));

    k.push_back({"fgim", "weights",
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.fgim.weights.size(); ++i) {
                     if (i) s += ", ";
                     s += format_double(c.fgim.weights[i]);
                   }
                   return s;
                 },
                 [](RunConfig& c, const std::string& v) {
                   std::vector<double> w;
                   std::stringstream in(v);
                   std::string item;
                   while (std::getline(in, item, ',')) w.push_back(parse_double(trim(item)));
                   if (w.empty()) throw BadValue{"needs at least one weight"};
                   for (std::size_t i = 0; i < w.size(); ++i) {
                     if (!(w[i] > 0.0)) throw BadValue{"weights must be positive"};
                     if (i > 0 && !(w[i] > w[i - 1])) throw BadValue{"weights must be strictly ascending"};
                   }
                   c.fgim.weights = std::move(w);
                 }});
    k.push_back(real_key("fgim", "lambda", [](auto& c) -> auto& { return c.fgim.decay; },
                         [](double x) { return x > 0.0 && x < 1.0; }, "(0,1)"));
    k.push_back(real_key("fgim", "threshold", [](auto& c) -> auto& { return c.fgim.threshold; }, positive,
                         "(0,inf)"));
    k.push_back(size_key("fgim", "s_steps", [](auto& c) -> auto& { return c.fgim.s_steps; }, 1));
    return k;
  }();
  return table;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw, section;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "data" && section != "ae" && section != "classifier" && section != "fgim") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const auto name = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (name.empty()) fail("missing key before '='");
    if (section.empty()) fail("key '" + name + "' appears before any section");
    const Key* key = nullptr;
    for (const auto& k : keys()) {
      if (k.section == section && k.name == name) key = &k;
    }
    if (!key) fail("unknown key '" + name + "' in [" + section + "]");
    try {
      key->set(config, value);
    } catch (const BadValue& e) {
      fail("key '" + section + "." + name + "': " + e.why);
    }
  }
  if (config.ae.hp.latent_dim != 2 * config.ae.hp.gru_hidden) {
    throw ConfigError(source + ": key 'ae.latent_dim' must equal 2 * ae.gru_hidden");
  }
  if (config.ae.hp.embed_dim % config.ae.hp.heads != 0) {
    throw ConfigError(source + ": key 'ae.embed_dim' must be divisible by ae.heads");
  }
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot read config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

ae::HyperParams autoencoder_hyper(const RunConfig& config, std::size_t vocab_size) {
  auto hp = config.ae.hp;
  hp.vocab_size = vocab_size;
  return hp;
}

clf::ClassifierHyperParams classifier_hyper(const RunConfig& config, std::size_t latent_dim, std::size_t attributes) {
  auto hp = config.classifier.hp;
  hp.latent_dim = latent_dim;
  hp.attributes = attributes;
  return hp;
}

RunConfig toy_preset(std::size_t aspects) {
  RunConfig c;
  c.data.dir = "toy";
  c.data.layout = text::DatasetLayout::tsv_with_attribute_columns;
  c.data.output_dir = "toy-out";
  auto& hp = c.ae.hp;
  hp.embed_dim = 64;
  hp.latent_dim = 64;
  hp.attn_dim = 64;
  hp.ffn_dim = 128;
  hp.gru_hidden = 32;
  hp.batch_size = 32;
  hp.epochs = 8;
  hp.dropout = aspects > 1 ? 0.1 : 0.0;
  c.classifier.hp.batch_size = 32;
  c.classifier.hp.epochs = aspects > 1 ? 200 : 80;
  return c;
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace fgim::io
