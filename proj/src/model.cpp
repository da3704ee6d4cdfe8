#include "tockcheck/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace tockcheck {

namespace {

template <typename T>
const T* find_named(const std::vector<T>& xs, const std::string& n)
{
    auto it = std::find_if(xs.begin(), xs.end(), [&](const T& x) { return x.name == n; });
    return it == xs.end() ? nullptr : &*it;
}

}  // namespace

const StateDecl* Machine::node(const std::string& n) const { return find_named(nodes, n); }
const EventDecl* Machine::event(const std::string& n) const { return find_named(events, n); }
const VarDecl* Machine::variable(const std::string& n) const { return find_named(variables, n); }

const MachineRef* Controller::instance(const std::string& m) const
{
    auto it = std::find_if(machines.begin(), machines.end(), [&](const MachineRef& r) { return r.machine == m; });
    return it == machines.end() ? nullptr : &*it;
}

const TypeDecl* ModelFile::type(const std::string& n) const { return find_named(types, n); }
const Machine* ModelFile::machine(const std::string& n) const { return find_named(machines, n); }
const Controller* ModelFile::controller(const std::string& n) const { return find_named(controllers, n); }
const InterfaceDecl* ModelFile::interface(const std::string& n) const { return find_named(interfaces, n); }
const PlatformDecl* ModelFile::platform(const std::string& n) const { return find_named(platforms, n); }
const FunctionDecl* ModelFile::function(const std::string& n) const { return find_named(functions, n); }
const ConfigDecl* ModelFile::config(const std::string& n) const { return find_named(configs, n); }

void ModelConfig::merge(const ModelConfig& other)
{
    for (const auto& [k, v] : other.ranges) ranges[k] = v;
    for (const auto& [k, v] : other.constants) constants[k] = v;
}

ModelConfig config_from(const ConfigDecl& decl)
{
    ModelConfig c;
    for (const auto& e : decl.entries) {
        if (e.range) c.ranges[e.name] = *e.range;
        if (e.value) c.constants[e.name] = *e.value;
    }
    return c;
}

ModelFile apply_config(ModelFile model, const ModelConfig& config)
{
    for (const auto& [name, range] : config.ranges) {
        auto it = std::find_if(model.types.begin(), model.types.end(), [&](const TypeDecl& t) { return t.name == name; });
        if (it == model.types.end() || it->kind != TypeDecl::Kind::range) {
            throw std::invalid_argument("'" + name + "' is not a range type of the model");
        }
        if (range.lo > range.hi) throw std::invalid_argument("empty range for '" + name + "'");
        it->range = range;
    }
    for (const auto& [name, value] : config.constants) {
        auto it = std::find_if(model.constants.begin(), model.constants.end(),
                               [&](const ConstDecl& c) { return c.name == name; });
        if (it == model.constants.end()) throw std::invalid_argument("'" + name + "' is not a constant of the model");
        Expr e;
        if (value < 0) {
            e.op = Expr::Op::neg;
            Expr inner;
            inner.value = -value;
            e.args.push_back(inner);
        } else {
            e.value = value;
        }
        it->value = e;
    }
    return model;
}

}  // namespace tockcheck
