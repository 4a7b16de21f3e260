"""Zero- and few-shot keyphrase extraction with a chat-completion model."""

from .client import (LlmClient, LlmConfig, LlmConfigError, LlmError, RateLimiter, TranscriptStore,
                     call_llm)
from .parse import parse_response
from .runs import ExtractionRun, RunAggregate, aggregate_runs, combine_theme_runs, run_extraction
from .templates import (Example, PromptTemplate, TemplateError, load_templates, render_prompt,
                        validate_template)
