//! In-memory architecture metamodel.
//!
//! A model is a set of data nodes (components with a data representation,
//! typed ports and an optional behavior graph), directed connections between
//! ports, and the data sources that quality checks run against. All
//! cross-references are by name; the validator resolves them.
//!
//! Enumerations whose members are nested under a category (data formats,
//! storage technologies) are flattened into a single enum that knows its
//! category, so a kind can never disagree with its family.

mod metrics;

use std::fmt;

pub use metrics::{behavior_order, complexity, Complexity, OrderError};

macro_rules! keyword_enum {
    ($(#[$meta:meta])* pub enum $name:ident { $($variant:ident => $kw:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            /// Spelling used in the textual DSL and the XMI subset.
            pub fn keyword(self) -> &'static str {
                match self {
                    $($name::$variant => $kw),+
                }
            }

            pub fn from_keyword(s: &str) -> Option<Self> {
                match s {
                    $($kw => Some($name::$variant),)+
                    _ => None,
                }
            }

            /// Comma-separated list of accepted keywords, for diagnostics.
            pub fn expected() -> String {
                [$($kw),+].join(", ")
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.keyword())
            }
        }
    };
}

keyword_enum! {
    /// Abstraction level: structure only, or structure plus behavior.
    pub enum Level {
        Hla => "HLA",
        Lla => "LLA",
    }
}

keyword_enum! {
    pub enum FormatCategory {
        Structured => "structured",
        SemiStructured => "semi_structured",
        Unstructured => "unstructured",
    }
}

keyword_enum! {
    pub enum DataFormat {
        RelationalDb => "relational_db",
        Email => "email",
        Sms => "sms",
        Csv => "csv",
        Json => "json",
        Xml => "xml",
        Gps => "gps",
        Multimedia => "multimedia",
        OfficeFiles => "office_files",
    }
}

impl DataFormat {
    pub fn category(self) -> FormatCategory {
        use DataFormat::*;
        match self {
            RelationalDb => FormatCategory::Structured,
            Email | Sms | Csv | Json | Xml => FormatCategory::SemiStructured,
            Gps | Multimedia | OfficeFiles => FormatCategory::Unstructured,
        }
    }
}

keyword_enum! {
    pub enum StorageFamily {
        NoSql => "nosql",
        NewSql => "newsql",
        FileSystem => "filesystem",
    }
}

keyword_enum! {
    pub enum StorageTech {
        Document => "document",
        KeyValue => "key_value",
        Graph => "graph",
        Column => "column",
        Historical => "historical",
        RealTime => "real_time",
        Stream => "stream",
        Timestamp => "timestamp",
        Hdf => "hdf",
        Gfs => "gfs",
        Afs => "afs",
        Gpfs => "gpfs",
        Blobseer => "blobseer",
    }
}

impl StorageTech {
    pub fn family(self) -> StorageFamily {
        use StorageTech::*;
        match self {
            Document | KeyValue | Graph | Column => StorageFamily::NoSql,
            Historical | RealTime | Stream | Timestamp => StorageFamily::NewSql,
            Hdf | Gfs | Afs | Gpfs | Blobseer => StorageFamily::FileSystem,
        }
    }

    pub fn in_family(family: StorageFamily) -> impl Iterator<Item = StorageTech> {
        StorageTech::ALL
            .iter()
            .copied()
            .filter(move |k| k.family() == family)
    }
}

keyword_enum! {
    pub enum Location {
        Cloud => "cloud",
        OnPremise => "onpremise",
    }
}

keyword_enum! {
    pub enum Processing {
        Batch => "batch",
        RealTime => "realtime",
    }
}

keyword_enum! {
    pub enum Direction {
        In => "in",
        Out => "out",
    }
}

keyword_enum! {
    pub enum Pattern {
        SendReceive => "send_receive",
        RequestResponse => "request_response",
        PublishSubscribe => "publish_subscribe",
    }
}

keyword_enum! {
    pub enum Mode {
        Sync => "sync",
        Async => "async",
    }
}

keyword_enum! {
    pub enum Dimension {
        Uniqueness => "uniqueness",
        Completeness => "completeness",
        Validity => "validity",
        Consistency => "consistency",
        Timeliness => "timeliness",
        Accuracy => "accuracy",
    }
}

impl Dimension {
    /// Capitalized name as it appears in the mapper table.
    pub fn label(self) -> &'static str {
        match self {
            Dimension::Uniqueness => "Uniqueness",
            Dimension::Completeness => "Completeness",
            Dimension::Validity => "Validity",
            Dimension::Consistency => "Consistency",
            Dimension::Timeliness => "Timeliness",
            Dimension::Accuracy => "Accuracy",
        }
    }
}

keyword_enum! {
    pub enum SourceKind {
        Mysql => "mysql",
        CsvFile => "csvfile",
        JsonFile => "jsonfile",
    }
}

impl SourceKind {
    /// Connection keys that must be present for this kind. No other keys
    /// are accepted.
    pub fn required_keys(self) -> &'static [&'static str] {
        match self {
            SourceKind::Mysql => &["host", "database", "table"],
            SourceKind::CsvFile | SourceKind::JsonFile => &["path"],
        }
    }
}

/// Every key any source kind understands, in canonical print order.
pub const CONNECTION_KEYS: &[&str] = &["host", "database", "table", "path"];

keyword_enum! {
    pub enum ColumnType {
        String => "string",
        Integer => "integer",
        Number => "number",
        Boolean => "boolean",
        Date => "date",
    }
}

keyword_enum! {
    pub enum IngestionStep {
        Identify => "identify",
        Validate => "validate",
        Compress => "compress",
    }
}

keyword_enum! {
    pub enum ProcessStep {
        Classify => "classify",
        Filter => "filter",
        Sort => "sort",
        Transform => "transform",
        Clean => "clean",
        Validate => "validate",
        Reduce => "reduce",
    }
}

keyword_enum! {
    pub enum StoreStep {
        Save => "save",
        Retrieve => "retrieve",
        Archive => "archive",
        Govern => "govern",
    }
}

keyword_enum! {
    pub enum AnalyzeStep {
        Describe => "describe",
        Diagnose => "diagnose",
        Predict => "predict",
        Prescribe => "prescribe",
    }
}

keyword_enum! {
    pub enum ConsumeStep {
        Visualize => "visualize",
        Report => "report",
        Api => "api",
        Share => "share",
    }
}

keyword_enum! {
    /// Action kinds without their payloads; used for keyword lookup.
    pub enum ActionKind {
        Generation => "generation",
        Ingestion => "ingestion",
        Process => "process",
        Store => "store",
        Analyze => "analyze",
        Consume => "consume",
        SendData => "send_data",
        VerifyData => "verify_data",
    }
}

impl ActionKind {
    /// Keywords of the sub-kinds this action accepts after a `.`.
    pub fn sub_kinds(self) -> &'static [&'static str] {
        match self {
            ActionKind::Ingestion => &["identify", "validate", "compress"],
            ActionKind::Process => &[
                "classify",
                "filter",
                "sort",
                "transform",
                "clean",
                "validate",
                "reduce",
            ],
            ActionKind::Store => &["save", "retrieve", "archive", "govern"],
            ActionKind::Analyze => &["describe", "diagnose", "predict", "prescribe"],
            ActionKind::Consume => &["visualize", "report", "api", "share"],
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchitectureModel {
    pub name: String,
    pub level: Level,
    pub nodes: Vec<DataNode>,
    pub connections: Vec<Connection>,
    pub sources: Vec<SourceBinding>,
}

impl ArchitectureModel {
    pub fn new(name: impl Into<String>, level: Level) -> Self {
        ArchitectureModel {
            name: name.into(),
            level,
            nodes: Vec::new(),
            connections: Vec::new(),
            sources: Vec::new(),
        }
    }

    pub fn node(&self, name: &str) -> Option<&DataNode> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn source(&self, name: &str) -> Option<&SourceBinding> {
        self.sources.iter().find(|s| s.name == name)
    }

    /// Resolves a port reference to the port declaration, if both the node
    /// and the port exist.
    pub fn resolve(&self, port: &PortRef) -> Option<&Port> {
        self.node(&port.node).and_then(|n| n.port(&port.port))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataNode {
    pub name: String,
    pub representation: DataRepresentation,
    pub ports: Vec<Port>,
    pub behavior: Option<NodeBehavior>,
}

impl DataNode {
    pub fn new(name: impl Into<String>) -> Self {
        DataNode {
            name: name.into(),
            representation: DataRepresentation::default(),
            ports: Vec::new(),
            behavior: None,
        }
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataRepresentation {
    pub formats: Vec<DataFormat>,
    pub storage: Option<StorageTech>,
    pub location: Option<Location>,
    pub processing: Vec<Processing>,
}

impl DataRepresentation {
    pub fn is_empty(&self) -> bool {
        self.attribute_count() == 0
    }

    pub fn attribute_count(&self) -> usize {
        self.formats.len()
            + usize::from(self.storage.is_some())
            + usize::from(self.location.is_some())
            + self.processing.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
}

impl Port {
    pub fn new(name: impl Into<String>, direction: Direction) -> Self {
        Port {
            name: name.into(),
            direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PortRef {
    pub node: String,
    pub port: String,
}

impl PortRef {
    pub fn new(node: impl Into<String>, port: impl Into<String>) -> Self {
        PortRef {
            node: node.into(),
            port: port.into(),
        }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.port)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    /// Derived from the endpoints: `<node>.<port>-><node>.<port>`.
    pub id: String,
    pub from: PortRef,
    pub to: PortRef,
    pub pattern: Pattern,
    pub mode: Mode,
}

impl Connection {
    pub fn new(from: PortRef, to: PortRef, pattern: Pattern, mode: Mode) -> Self {
        Connection {
            id: Self::id_for(&from, &to),
            from,
            to,
            pattern,
            mode,
        }
    }

    pub fn id_for(from: &PortRef, to: &PortRef) -> String {
        format!("{from}->{to}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeBehavior {
    pub elements: Vec<BehaviorElement>,
    pub links: Vec<Link>,
}

impl NodeBehavior {
    pub fn element(&self, name: &str) -> Option<&BehaviorElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    pub fn actions(&self) -> impl Iterator<Item = (&str, &Action)> {
        self.elements.iter().filter_map(|e| match &e.kind {
            ElementKind::Action(a) => Some((e.name.as_str(), a)),
            ElementKind::Event(_) => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorElement {
    pub name: String,
    pub kind: ElementKind,
}

impl BehaviorElement {
    pub fn action(name: impl Into<String>, action: Action) -> Self {
        BehaviorElement {
            name: name.into(),
            kind: ElementKind::Action(action),
        }
    }

    pub fn event(name: impl Into<String>, event: Event) -> Self {
        BehaviorElement {
            name: name.into(),
            kind: ElementKind::Event(event),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    Action(Action),
    Event(Event),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Generation,
    Ingestion(Option<IngestionStep>),
    Process(Option<ProcessStep>),
    Store(Option<StoreStep>),
    Analyze(Option<AnalyzeStep>),
    Consume(Option<ConsumeStep>),
    /// Emits data through an out-port of the owning node.
    SendData { port: String },
    VerifyData(QualitySpec),
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Generation => ActionKind::Generation,
            Action::Ingestion(_) => ActionKind::Ingestion,
            Action::Process(_) => ActionKind::Process,
            Action::Store(_) => ActionKind::Store,
            Action::Analyze(_) => ActionKind::Analyze,
            Action::Consume(_) => ActionKind::Consume,
            Action::SendData { .. } => ActionKind::SendData,
            Action::VerifyData(_) => ActionKind::VerifyData,
        }
    }

    pub fn sub_kind(&self) -> Option<&'static str> {
        match self {
            Action::Ingestion(s) => s.map(IngestionStep::keyword),
            Action::Process(s) => s.map(ProcessStep::keyword),
            Action::Store(s) => s.map(StoreStep::keyword),
            Action::Analyze(s) => s.map(AnalyzeStep::keyword),
            Action::Consume(s) => s.map(ConsumeStep::keyword),
            _ => None,
        }
    }

    /// Builds a payload-free action from its kind and optional sub-kind
    /// keyword. Returns `None` when the sub-kind is not in the kind's
    /// vocabulary, or when the kind needs a payload (`send_data`,
    /// `verify_data`).
    pub fn simple(kind: ActionKind, sub: Option<&str>) -> Option<Action> {
        fn step<T>(sub: Option<&str>, f: fn(&str) -> Option<T>) -> Option<Option<T>> {
            match sub {
                None => Some(None),
                Some(s) => f(s).map(Some),
            }
        }
        Some(match kind {
            ActionKind::Generation if sub.is_none() => Action::Generation,
            ActionKind::Ingestion => Action::Ingestion(step(sub, IngestionStep::from_keyword)?),
            ActionKind::Process => Action::Process(step(sub, ProcessStep::from_keyword)?),
            ActionKind::Store => Action::Store(step(sub, StoreStep::from_keyword)?),
            ActionKind::Analyze => Action::Analyze(step(sub, AnalyzeStep::from_keyword)?),
            ActionKind::Consume => Action::Consume(step(sub, ConsumeStep::from_keyword)?),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// Triggered when data arrives on an in-port of the owning node.
    ReceiveData { port: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub from: String,
    pub to: String,
}

impl Link {
    pub fn new(from: impl Into<String>, to: impl Into<String>) -> Self {
        Link {
            from: from.into(),
            to: to.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualitySpec {
    pub source: String,
    pub rules: Vec<QualityRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityRule {
    pub column: String,
    pub dimension: Dimension,
    /// Full expectation identifier, e.g. `expect_column_values_to_be_unique`.
    pub expectation: String,
    /// Keyword parameters in declaration order.
    pub params: Vec<(String, ParamValue)>,
}

/// A literal parameter value as written in a model.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Num(f64),
    Str(String),
    Bool(bool),
    List(Vec<ParamValue>),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamValue::Int(i) => Some(*i as f64),
            ParamValue::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            ParamValue::Int(i) => (*i).into(),
            ParamValue::Num(n) => serde_json::Number::from_f64(*n)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            ParamValue::Str(s) => s.clone().into(),
            ParamValue::Bool(b) => (*b).into(),
            ParamValue::List(items) => items.iter().map(ParamValue::to_json).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBinding {
    pub name: String,
    pub kind: SourceKind,
    /// Connection details in declaration order.
    pub connection: Vec<(String, String)>,
    pub columns: Vec<ColumnMeta>,
}

impl SourceBinding {
    pub fn connection_value(&self, key: &str) -> Option<&str> {
        self.connection
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&ColumnMeta> {
        self.columns.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMeta {
    pub name: String,
    pub ty: ColumnType,
}

impl ColumnMeta {
    pub fn new(name: impl Into<String>, ty: ColumnType) -> Self {
        ColumnMeta {
            name: name.into(),
            ty,
        }
    }
}
