from .aggregate import AggregateReport, aggregate, format_csv, format_tables, improvement_bucket
from .clients import (
    AnthropicClient,
    Generation,
    GenerationParams,
    GoogleClient,
    ModelClient,
    OpenAIClient,
    ScriptedMockClient,
    TransportError,
    make_client,
)
from .prompt import build_prompt
from .runner import (
    RunConfig,
    SessionResult,
    TurnResult,
    read_results,
    record_line,
    run_benchmark,
    run_session,
    session_record,
    write_results,
)
