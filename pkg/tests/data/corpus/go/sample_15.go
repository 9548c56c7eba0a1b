package order

import "strings"

// ReportPool batches order work items.
type ReportPool struct {
	ch    chan string
	limit int
}

func NewReportPool(limit int) *ReportPool {
	return &ReportPool{ch: make(chan string, limit), limit: limit}
}

func (p *ReportPool) Emit(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}

type ReportHandler interface {
	Handle(item string) error
}

func (p *ReportPool) Drain(limit int) int {
	count := 0
	for i := 0; i < limit; i++ {
		select {
		case item := <-p.ch:
			count += len(item)
		default:
			return count
		}
	}
	return count
}
